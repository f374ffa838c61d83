#include "spinflow/clifford.hpp"

#include <stdexcept>

namespace spinflow {

namespace {

const cplx I{0.0, 1.0};

Eigen::Matrix2cd pauli(int k) {
  Eigen::Matrix2cd s;
  switch (k) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -I, I, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

}  // namespace

CliffordRep build_rep(int n) {
  CliffordRep rep;
  rep.dim = n;
  if (n == 2) {
    // Off-diagonal so that D swaps the chirality blocks of omega = diag(1,-1).
    Eigen::Matrix2cd g1, g2;
    g1 << 0, 1, -1, 0;
    g2 << 0, -I, -I, 0;
    rep.gammas = {g1, g2};
  } else if (n == 3) {
    rep.gammas = {I * pauli(1), I * pauli(2), I * pauli(3)};
  } else if (n == 4) {
    // g_mu = [[0, s_mu], [t_mu, 0]], s = (i s1, i s2, i s3, 1), t_mu = -s_mu^+.
    for (int mu = 1; mu <= 4; ++mu) {
      Eigen::Matrix2cd s = mu <= 3 ? Eigen::Matrix2cd(I * pauli(mu))
                                   : Eigen::Matrix2cd(Eigen::Matrix2cd::Identity());
      Eigen::Matrix4cd g = Eigen::Matrix4cd::Zero();
      g.block<2, 2>(0, 2) = s;
      g.block<2, 2>(2, 0) = -s.adjoint();
      rep.gammas.push_back(g);
    }
  } else {
    throw std::invalid_argument("build_rep: dimension must be 2, 3 or 4");
  }
  return rep;
}

Eigen::MatrixXcd volume_element(const CliffordRep& rep) {
  const int d = rep.rep_dim();
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Identity(d, d);
  for (const auto& g : rep.gammas) w = w * g;
  int p = (rep.dim + 1) / 2;
  cplx phase = 1;
  for (int k = 0; k < p; ++k) phase *= I;
  return phase * w;
}

Eigen::VectorXcd clifford_mul(const CliffordRep& rep, const Eigen::VectorXd& v,
                              const Eigen::VectorXcd& s) {
  if (v.size() != rep.dim || s.size() != rep.rep_dim())
    throw std::invalid_argument("clifford_mul: dimension mismatch");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(s.size());
  for (int j = 0; j < rep.dim; ++j)
    if (v[j] != 0.0) out += v[j] * (rep.gammas[j] * s);
  return out;
}

std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> chirality_projectors(const CliffordRep& rep) {
  if (rep.dim % 2 != 0)
    throw std::invalid_argument("chirality_projectors: dimension must be even");
  const int d = rep.rep_dim();
  Eigen::MatrixXcd w = volume_element(rep);
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  return {(id + w) / 2.0, (id - w) / 2.0};
}

Eigen::MatrixXcd two_form_action(const CliffordRep& rep, const Eigen::MatrixXcd& F) {
  if (F.rows() != rep.dim || F.cols() != rep.dim)
    throw std::invalid_argument("two_form_action: F has wrong size");
  if (!exactly_zero(Eigen::MatrixXcd(F + F.transpose()))) {
    // Allow roundoff-level asymmetry from upstream arithmetic, nothing more.
    if ((F + F.transpose()).cwiseAbs().maxCoeff() > 1e-13 * (1.0 + F.cwiseAbs().maxCoeff()))
      throw std::invalid_argument("two_form_action: F is not antisymmetric");
  }
  const int d = rep.rep_dim();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < rep.dim; ++i)
    for (int j = i + 1; j < rep.dim; ++j)
      out += F(i, j) * (rep.gammas[i] * rep.gammas[j]);
  return out;
}

Eigen::Matrix2cd quadratic_map(const CliffordRep& rep, const Eigen::Vector4cd& psi) {
  if (rep.dim != 4) throw std::invalid_argument("quadratic_map: needs n = 4");
  // Positive chirality = first block of omega = diag(1,1,-1,-1).
  if (std::abs(psi[2]) != 0.0 || std::abs(psi[3]) != 0.0)
    throw std::invalid_argument("quadratic_map: spinor has negative-chirality part");
  Eigen::Vector2cd p = psi.head<2>();
  Eigen::Matrix2cd q = p * p.adjoint();
  double n2 = p.squaredNorm();
  q -= 0.5 * n2 * Eigen::Matrix2cd::Identity();
  return q;
}

std::vector<Eigen::Matrix4d> selfdual_basis() {
  std::vector<Eigen::Matrix4d> basis;
  const int pairs[3][4] = {{0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}};
  for (auto& p : pairs) {
    Eigen::Matrix4d F = Eigen::Matrix4d::Zero();
    F(p[0], p[1]) = 1;
    F(p[1], p[0]) = -1;
    F(p[2], p[3]) = 1;
    F(p[3], p[2]) = -1;
    basis.push_back(F);
  }
  return basis;
}

Eigen::Matrix4cd solve_selfdual_for_endo(const CliffordRep& rep, const Eigen::Matrix2cd& endo) {
  auto basis = selfdual_basis();
  // The three W+ blocks action(eta_k)|W+ are Frobenius-orthogonal with |.|_F^2 = 8.
  Eigen::Matrix4cd F = Eigen::Matrix4cd::Zero();
  for (const auto& eta : basis) {
    Eigen::Matrix2cd B = two_form_action(rep, eta.cast<cplx>()).block<2, 2>(0, 0);
    cplx coeff = (B.adjoint() * endo).trace() / (B.adjoint() * B).trace();
    F += coeff * eta.cast<cplx>();
  }
  Eigen::Matrix2cd back = two_form_action(rep, F).block<2, 2>(0, 0);
  double res = (back - endo).cwiseAbs().maxCoeff();
  if (res > 1e-12 * (1.0 + endo.cwiseAbs().maxCoeff()))
    throw std::runtime_error("solve_selfdual_for_endo: no self-dual solution (convention bug)");
  return F;
}

double two_form_norm_sq(const Eigen::Matrix4cd& F) {
  double s = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) s += std::norm(F(i, j));
  return s;
}

Eigen::Matrix4cd hodge_star(const Eigen::Matrix4cd& F) {
  // Pairs each component with its complementary index pair, with the permutation sign.
  Eigen::Matrix4cd S = Eigen::Matrix4cd::Zero();
  const int eps[3][5] = {{0, 1, 2, 3, +1}, {0, 2, 1, 3, -1}, {0, 3, 1, 2, +1}};
  for (auto& e : eps) {
    S(e[2], e[3]) = double(e[4]) * F(e[0], e[1]);
    S(e[0], e[1]) = double(e[4]) * F(e[2], e[3]);
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < i; ++j) S(i, j) = -S(j, i);
  return S;
}

bool exactly_equal(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

bool exactly_zero(const Eigen::MatrixXcd& a) {
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) != cplx(0.0, 0.0)) return false;
  return true;
}

}  // namespace spinflow

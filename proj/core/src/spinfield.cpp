#include "spinflow/spinfield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spinflow/eigensolve.hpp"
#include "spinflow/rng.hpp"
#include "spinflow/spectral.hpp"

namespace spinflow {

namespace {

const cplx I{0.0, 1.0};

void require_compatible(const CliffordRep& rep, const SpinorField& psi, const char* who) {
  if (rep.dim != psi.grid.dim || rep.rep_dim() != psi.comps)
    throw std::invalid_argument(std::string(who) + ": representation/field dimension mismatch");
}

SpinorField zero_like(const SpinorField& s) { return SpinorField(s.grid, s.comps, s.twist); }

SpinorField sub(const SpinorField& a, const SpinorField& b) {
  SpinorField out = a;
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] -= b.v[i];
  return out;
}

// out_a += c * gamma(a,b) * m(x) * psi_b(x), for one matrix and one scalar field
void accumulate_matrix_mul(SpinorField& out, const Eigen::MatrixXcd& gamma, const Field& m,
                           const SpinorField& psi, cplx c) {
  const std::size_t nn = psi.grid.nodes();
  for (int a = 0; a < psi.comps; ++a)
    for (int b = 0; b < psi.comps; ++b) {
      cplx gab = gamma(a, b);
      if (gab == cplx(0, 0)) continue;
      cplx* oa = out.comp(a);
      const cplx* pb = psi.comp(b);
      const cplx f = c * gab;
      for (std::size_t i = 0; i < nn; ++i) oa[i] += f * m.v[i] * pb[i];
    }
}

void accumulate_matrix(SpinorField& out, const Eigen::MatrixXcd& gamma, const SpinorField& psi,
                       cplx c) {
  const std::size_t nn = psi.grid.nodes();
  for (int a = 0; a < psi.comps; ++a)
    for (int b = 0; b < psi.comps; ++b) {
      cplx gab = gamma(a, b);
      if (gab == cplx(0, 0)) continue;
      cplx* oa = out.comp(a);
      const cplx* pb = psi.comp(b);
      const cplx f = c * gab;
      for (std::size_t i = 0; i < nn; ++i) oa[i] += f * pb[i];
    }
}

}  // namespace

SpinorField dirac(const CliffordRep& rep, const SpinorField& psi) {
  require_compatible(rep, psi, "dirac");
  SpinorField out = zero_like(psi);
  for (int j = 0; j < rep.dim; ++j) {
    SpinorField d = spectral::derivative(psi, j);
    accumulate_matrix(out, rep.gammas[j], d, 1.0);
  }
  return out;
}

SpinorField clifford_mul_field(const CliffordRep& rep, const std::vector<Field>& vec,
                               const SpinorField& psi) {
  require_compatible(rep, psi, "clifford_mul_field");
  if ((int)vec.size() != rep.dim)
    throw std::invalid_argument("clifford_mul_field: wrong number of components");
  SpinorField out = zero_like(psi);
  for (int j = 0; j < rep.dim; ++j) accumulate_matrix_mul(out, rep.gammas[j], vec[j], psi, 1.0);
  return out;
}

WeightedDirac::WeightedDirac(const CliffordRep& rep, const Field& f)
    : rep_(rep), grad_f_(spectral::gradient(f)) {}

SpinorField WeightedDirac::operator()(const SpinorField& psi) const {
  SpinorField out = dirac(rep_, psi);
  for (int j = 0; j < rep_.dim; ++j)
    accumulate_matrix_mul(out, rep_.gammas[j], grad_f_[j], psi, -0.5);
  return out;
}

SpinorField weighted_dirac(const CliffordRep& rep, const SpinorField& psi, const Field& f) {
  require_same_grid(psi.grid, f.grid, "weighted_dirac");
  return WeightedDirac(rep, f)(psi);
}

cplx weighted_inner(const SpinorField& a, const SpinorField& b, const Field& f) {
  require_same_grid(a.grid, b.grid, "weighted_inner");
  const std::size_t nn = a.grid.nodes();
  cplx s = 0;
  for (int c = 0; c < a.comps; ++c) {
    const cplx *pa = a.comp(c), *pb = b.comp(c);
    for (std::size_t i = 0; i < nn; ++i) s += std::conj(pa[i]) * pb[i] * std::exp(-f.v[i].real());
  }
  return s * a.grid.cell_volume();
}

double weighted_norm_sq(const SpinorField& a, const Field& f) {
  return weighted_inner(a, a, f).real();
}

double check_weighted_sl(const CliffordRep& rep, const Field& f, const SpinorField& psi) {
  require_same_grid(psi.grid, f.grid, "check_weighted_sl");
  WeightedDirac wd(rep, f);
  SpinorField lhs = wd(wd(psi));

  const auto& grad = wd.grad_f();
  Field lapf = spectral::laplacian(f);
  const std::size_t nn = psi.grid.nodes();
  std::vector<double> Rf(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    double g2 = 0;
    for (int j = 0; j < rep.dim; ++j) g2 += grad[j].v[i].real() * grad[j].v[i].real();
    Rf[i] = 2.0 * lapf.v[i].real() - g2;
  }

  SpinorField rhs = spectral::laplacian(psi);
  for (auto& z : rhs.v) z = -z;
  for (int j = 0; j < rep.dim; ++j) {
    SpinorField d = spectral::derivative(psi, j);
    for (int c = 0; c < psi.comps; ++c) {
      cplx* rc = rhs.comp(c);
      const cplx* dc = d.comp(c);
      for (std::size_t i = 0; i < nn; ++i) rc[i] += grad[j].v[i].real() * dc[i];
    }
  }
  for (int c = 0; c < psi.comps; ++c) {
    cplx* rc = rhs.comp(c);
    const cplx* pc = psi.comp(c);
    for (std::size_t i = 0; i < nn; ++i) rc[i] += 0.25 * Rf[i] * pc[i];
  }
  return max_abs(sub(lhs, rhs));
}

double check_weighted_ibp(const CliffordRep& rep, const Field& f, const SpinorField& psi,
                          const SpinorField& phi) {
  WeightedDirac wd(rep, f);
  cplx a = weighted_inner(psi, wd(phi), f);
  cplx b = weighted_inner(wd(psi), phi, f);
  return std::abs(a - b);
}

double check_energy_identity(const CliffordRep& rep, const Field& f, const SpinorField& psi) {
  WeightedDirac wd(rep, f);
  SpinorField dpsi = wd(psi);
  Field lapf = spectral::laplacian(f);
  const auto& grad = wd.grad_f();
  const std::size_t nn = psi.grid.nodes();
  const double cell = psi.grid.cell_volume();

  double lhs = 0, rhs = 0;
  for (std::size_t i = 0; i < nn; ++i) {
    double g2 = 0;
    for (int j = 0; j < rep.dim; ++j) g2 += grad[j].v[i].real() * grad[j].v[i].real();
    double Rf = 2.0 * lapf.v[i].real() - g2;
    double psi2 = 0, dpsi2 = 0;
    for (int c = 0; c < psi.comps; ++c) {
      psi2 += std::norm(psi.comp(c)[i]);
      dpsi2 += std::norm(dpsi.comp(c)[i]);
    }
    double w = std::exp(-f.v[i].real());
    lhs += 0.25 * Rf * psi2 * w;
    rhs += dpsi2 * w;
  }
  for (int j = 0; j < rep.dim; ++j) {
    SpinorField d = spectral::derivative(psi, j);
    for (std::size_t i = 0; i < nn; ++i) {
      double d2 = 0;
      for (int c = 0; c < psi.comps; ++c) d2 += std::norm(d.comp(c)[i]);
      rhs -= d2 * std::exp(-f.v[i].real());
    }
  }
  return std::abs(lhs - rhs) * cell;
}

double check_weighted_ricci_identity(const CliffordRep& rep, const Field& f,
                                     const SpinorField& psi, int axis) {
  if (axis < 0 || axis >= rep.dim)
    throw std::invalid_argument("check_weighted_ricci_identity: bad axis");
  WeightedDirac wd(rep, f);
  SpinorField lhs = sub(wd(spectral::derivative(psi, axis)), spectral::derivative(wd(psi), axis));

  std::vector<Field> hess_row;
  for (int k = 0; k < rep.dim; ++k)
    hess_row.push_back(spectral::derivative(wd.grad_f()[k], axis));
  SpinorField rhs = clifford_mul_field(rep, hess_row, psi);
  for (auto& z : rhs.v) z *= 0.5;
  return max_abs(sub(lhs, rhs));
}

double check_harmonic_ricci_pointwise(const CliffordRep& rep, const Field& f) {
  const Torus& g = f.grid;
  SpinorField psi(g, rep.rep_dim());
  const std::size_t nn = g.nodes();
  for (std::size_t i = 0; i < nn; ++i) psi.comp(0)[i] = std::exp(0.5 * f.v[i].real());

  WeightedDirac wd(rep, f);
  std::vector<double> lhs(nn, 0.0);
  for (int j = 0; j < rep.dim; ++j) {
    SpinorField t = wd(spectral::derivative(psi, j));
    for (std::size_t i = 0; i < nn; ++i)
      for (int c = 0; c < psi.comps; ++c) lhs[i] += std::norm(t.comp(c)[i]);
  }

  // |Hess f|^2 and |psi|^2 pointwise
  std::vector<Field> hess;
  for (int j = 0; j < rep.dim; ++j)
    for (int k = 0; k < rep.dim; ++k)
      hess.push_back(spectral::derivative(wd.grad_f()[k], j));
  double worst = 0;
  for (std::size_t i = 0; i < nn; ++i) {
    double h2 = 0;
    for (const auto& hf : hess) h2 += hf.v[i].real() * hf.v[i].real();
    double psi2 = std::exp(f.v[i].real());
    worst = std::max(worst, std::abs(0.25 * h2 * psi2 - lhs[i]));
  }
  return worst;
}

double check_weighted_dirac_conjugation(const CliffordRep& rep, const Field& f,
                                        const SpinorField& psi) {
  WeightedDirac wd(rep, f);
  SpinorField direct = wd(psi);

  SpinorField scaled = psi;
  const std::size_t nn = psi.grid.nodes();
  for (int c = 0; c < psi.comps; ++c)
    for (std::size_t i = 0; i < nn; ++i)
      scaled.comp(c)[i] *= std::exp(-0.5 * f.v[i].real());
  SpinorField conj = dirac(rep, scaled);
  for (int c = 0; c < psi.comps; ++c)
    for (std::size_t i = 0; i < nn; ++i)
      conj.comp(c)[i] *= std::exp(0.5 * f.v[i].real());
  return max_abs(sub(direct, conj));
}

// ---------------------------------------------------------------------------
// Spectra
// ---------------------------------------------------------------------------

namespace {

std::vector<double> lattice_values(const Torus& g, std::array<double, 4> twist, int count,
                                   int comps) {
  int M = 4;
  const double pi2 = 2.0 * std::numbers::pi;
  while (true) {
    std::vector<double> vals;
    std::array<int, 4> m{};
    for (int a = 0; a < g.dim; ++a) m[a] = -M;
    bool more = true;
    while (more) {
      double s = 0;
      for (int a = 0; a < g.dim; ++a) {
        double xi = pi2 * (m[a] + twist[a]) / g.length[a];
        s += xi * xi;
      }
      vals.push_back(s);
      more = false;
      for (int a = g.dim - 1; a >= 0; --a) {
        if (++m[a] <= M) {
          more = true;
          break;
        }
        m[a] = -M;
      }
    }
    std::sort(vals.begin(), vals.end());
    int need = (count + comps - 1) / comps;
    double lmax = g.length[0];
    for (int a = 1; a < g.dim; ++a) lmax = std::max(lmax, g.length[a]);
    double safe = pi2 * (M - 1) / lmax;
    if ((int)vals.size() >= need && vals[need - 1] < safe * safe) {
      std::vector<double> out;
      for (double v : vals) {
        for (int c = 0; c < comps && (int)out.size() < count; ++c) out.push_back(v);
        if ((int)out.size() >= count) break;
      }
      return out;
    }
    M *= 2;
    if (M > 512) throw std::runtime_error("dirac_spectrum: lattice enumeration overflow");
  }
}

}  // namespace

double lattice_lambda1(const Torus& grid, std::array<double, 4> twist) {
  return lattice_values(grid, twist, 1, 1)[0];
}

std::vector<double> dirac_spectrum(const CliffordRep& rep, const Torus& grid,
                                   std::array<double, 4> twist, const std::optional<Field>& f,
                                   int count) {
  if (count < 1) throw std::invalid_argument("dirac_spectrum: count >= 1");
  if (!f) return lattice_values(grid, twist, count, rep.rep_dim());

  require_same_grid(grid, f->grid, "dirac_spectrum");
  WeightedDirac wd(rep, *f);
  const std::size_t nn = grid.nodes();
  const int comps = rep.rep_dim();
  const std::size_t dim = nn * comps;
  std::vector<double> eh(nn), ehi(nn);  // e^{+-f/2}
  for (std::size_t i = 0; i < nn; ++i) {
    eh[i] = std::exp(0.5 * f->v[i].real());
    ehi[i] = 1.0 / eh[i];
  }

  using Mat = Eigen::MatrixXcd;

  // The first-derivative symbol vanishes on the Nyquist rows, so the raw
  // discrete D_f^2 has spurious zero modes there.  The solver works on the
  // Nyquist-free subspace; the complement is pushed up by a penalty so it can
  // never be selected as a small eigenvalue.
  double penalty = 2.0;
  for (int a = 0; a < grid.dim; ++a) {
    double xi = std::numbers::pi * grid.n / grid.length[a];
    penalty += xi * xi;
  }
  auto project = [&](SpinorField& psi, bool keep_complement_as_penalty, Mat* Ycol,
                     Eigen::Index j) {
    Field hat(grid);
    for (int c = 0; c < comps; ++c) {
      for (std::size_t i = 0; i < nn; ++i) hat.v[i] = psi.comp(c)[i];
      spectral::fft(grid, hat.v.data(), true);
      std::array<int, 4> k{};
      for (std::size_t idx = 0; idx < nn; ++idx) {
        if (spectral::is_nyquist_mode(grid, k))
          hat.v[idx] = keep_complement_as_penalty ? penalty * hat.v[idx] : cplx(0, 0);
        for (int a = grid.dim - 1; a >= 0; --a) {
          if (++k[a] < grid.n) break;
          k[a] = 0;
        }
      }
      spectral::fft(grid, hat.v.data(), false);
      if (Ycol)
        for (std::size_t i = 0; i < nn; ++i) (*Ycol)(c * nn + i, j) = hat.v[i];
      else
        for (std::size_t i = 0; i < nn; ++i) psi.comp(c)[i] = hat.v[i];
    }
  };

  // Symmetrized operator e^{-f/2} D_f^2 e^{f/2} on the Nyquist-free subspace,
  // Hermitian in plain l2; its eigenvalues there are those of D_f^2 in L^2_f.
  auto apply = [&](const Mat& X) {
    Mat Y(X.rows(), X.cols());
    SpinorField psi(grid, comps, twist);
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      for (int c = 0; c < comps; ++c)
        for (std::size_t i = 0; i < nn; ++i) psi.comp(c)[i] = X(c * nn + i, j);
      SpinorField low = psi;
      project(low, false, nullptr, 0);
      SpinorField scaled = low;
      for (int c = 0; c < comps; ++c)
        for (std::size_t i = 0; i < nn; ++i) scaled.comp(c)[i] *= eh[i];
      SpinorField out = wd(wd(scaled));
      for (int c = 0; c < comps; ++c)
        for (std::size_t i = 0; i < nn; ++i) out.comp(c)[i] *= ehi[i];
      project(out, false, nullptr, 0);
      // penalty keeps the Nyquist complement away from the bottom of the spectrum
      for (std::size_t i = 0; i < out.v.size(); ++i)
        out.v[i] += penalty * (psi.v[i] - low.v[i]);
      for (int c = 0; c < comps; ++c)
        for (std::size_t i = 0; i < nn; ++i) Y(c * nn + i, j) = out.comp(c)[i];
    }
    return Y;
  };
  using Vec = Eigen::VectorXcd;
  auto apply_one = [&](const Vec& x) {
    Mat X(dim, 1);
    X.col(0) = x;
    return Vec(apply(X).col(0));
  };
  auto prec_one = [&](const Vec& x) {
    Vec y(dim);
    Field hat(grid);
    for (int c = 0; c < comps; ++c) {
      for (std::size_t i = 0; i < nn; ++i) hat.v[i] = x[c * nn + i];
      spectral::fft(grid, hat.v.data(), true);
      std::array<int, 4> k{};
      for (std::size_t idx = 0; idx < nn; ++idx) {
        double s = 0;
        for (int a = 0; a < grid.dim; ++a) s += spectral::wavenumber_sq(grid, a, k[a], twist[a]);
        hat.v[idx] /= s + 1.0;
        for (int a = grid.dim - 1; a >= 0; --a) {
          if (++k[a] < grid.n) break;
          k[a] = 0;
        }
      }
      spectral::fft(grid, hat.v.data(), false);
      for (std::size_t i = 0; i < nn; ++i) y[c * nn + i] = hat.v[i];
    }
    return y;
  };
  // T + 1 is SPD (T >= 0 on the projected subspace, penalty elsewhere)
  auto solve = [&](const Vec& b) {
    Vec x = Vec::Zero(dim);
    auto op = [&](const Vec& v) { return Vec(apply_one(v) + v); };
    pcg<cplx>(op, prec_one, b, x, 1e-11, 1000);
    return x;
  };

  const int block = count + 8;
  CounterRng rng(0x5EEDF00Dull);
  Mat X0(dim, block);
  {
    SpinorField seed_field(grid, comps, twist);
    for (Eigen::Index j = 0; j < X0.cols(); ++j) {
      for (std::size_t i = 0; i < seed_field.v.size(); ++i)
        seed_field.v[i] = cplx(rng.next_symmetric(), rng.next_symmetric());
      project(seed_field, false, &X0, j);
    }
  }

  auto eig = inverse_subspace_smallest<cplx>(apply, solve, X0, count, 1e-9, 200);
  if (!eig.converged) throw std::runtime_error("dirac_spectrum: eigensolver did not converge");
  std::vector<double> out(eig.values.begin(), eig.values.begin() + count);
  return out;
}

SolitonScalingReport soliton_scaling_check(const CliffordRep& rep, const Torus& grid,
                                           std::array<double, 4> twist,
                                           const std::vector<double>& scales) {
  double l1 = lattice_lambda1(grid, twist);
  if (l1 < 1e-14)
    throw std::invalid_argument(
        "soliton_scaling_check: lambda_1 = 0 (harmonic spinors exist), scaling is vacuous");
  SolitonScalingReport rep_out;
  for (double tau : scales) {
    Torus scaled = grid;
    for (int a = 0; a < grid.dim; ++a) scaled.length[a] *= std::sqrt(tau);
    SolitonScalingRow row;
    row.tau = tau;
    row.lambda_scaled = dirac_spectrum(rep, scaled, twist, std::nullopt, 1)[0];
    row.lambda_reference = l1 / tau;
    row.rel_error = std::abs(row.lambda_scaled - row.lambda_reference) / row.lambda_reference;
    rep_out.max_rel_error = std::max(rep_out.max_rel_error, row.rel_error);
    rep_out.rows.push_back(row);
  }
  // expanding soliton analogue: tau(t) = t, lambda_1 must strictly decrease
  bool dec = true;
  double prev = 0;
  for (int k = 0; k < 8; ++k) {
    double t = 0.5 + 0.5 * k;
    Torus scaled = grid;
    for (int a = 0; a < grid.dim; ++a) scaled.length[a] *= std::sqrt(t);
    double v = dirac_spectrum(rep, scaled, twist, std::nullopt, 1)[0];
    if (k > 0 && !(v < prev)) dec = false;
    prev = v;
  }
  rep_out.decreasing_along_expansion = dec;
  return rep_out;
}

// ---------------------------------------------------------------------------
// Conformal T^2
// ---------------------------------------------------------------------------

SpinorField conformal_spin_derivative(const CliffordRep& rep, const ConformalTorusMetric& g,
                                      const SpinorField& psi, int axis) {
  if (rep.dim != 2 || psi.grid.dim != 2)
    throw std::invalid_argument("conformal_spin_derivative: T^2 only");
  Field u(psi.grid);
  for (std::size_t i = 0; i < u.v.size(); ++i) u.v[i] = cplx(g.u[i], 0.0);
  Field du = spectral::derivative(u, axis == 0 ? 1 : 0);
  const double sign = axis == 0 ? -0.5 : 0.5;  // (w_1, w_2) = (-d2 u, +d1 u)
  SpinorField out = spectral::derivative(psi, axis);
  Eigen::MatrixXcd G = rep.gammas[0] * rep.gammas[1];
  Field w = du;
  for (auto& z : w.v) z *= sign;
  accumulate_matrix_mul(out, G, w, psi, 1.0);
  return out;
}

SpinorField conformal_dirac(const CliffordRep& rep, const ConformalTorusMetric& g,
                            const SpinorField& psi) {
  require_same_grid(psi.grid, g.grid(), "conformal_dirac");
  SpinorField out = zero_like(psi);
  for (int j = 0; j < 2; ++j) {
    SpinorField nab = conformal_spin_derivative(rep, g, psi, j);
    accumulate_matrix(out, rep.gammas[j], nab, 1.0);
  }
  const std::size_t nn = psi.grid.nodes();
  for (int c = 0; c < psi.comps; ++c)
    for (std::size_t i = 0; i < nn; ++i) out.comp(c)[i] *= std::exp(-g.u[i]);
  return out;
}

Theorem31Report theorem31_check(const ConformalTorusMetric& g, double harmonic_tol) {
  CliffordRep rep = build_rep(2);
  const Torus grid = g.grid();
  const std::size_t nn = grid.nodes();
  const double cell = grid.cell_volume();

  EntropyResult entropy = lambda_entropy(g);

  // harmonic spinor of g by conformal covariance
  SpinorField phi(grid, 2);
  for (std::size_t i = 0; i < nn; ++i) phi.comp(0)[i] = std::exp(-0.5 * g.u[i]);
  SpinorField dphi = conformal_dirac(rep, g, phi);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < nn; ++i) {
    double w = std::exp(2.0 * g.u[i]);  // dV
    for (int c = 0; c < 2; ++c) {
      num += std::norm(dphi.comp(c)[i]) * w;
      den += std::norm(phi.comp(c)[i]) * w;
    }
  }
  Theorem31Report rep_out;
  rep_out.grid_n = g.n;
  rep_out.harmonic_residual = std::sqrt(num / den);
  if (rep_out.harmonic_residual > harmonic_tol)
    throw std::runtime_error("theorem31_check: harmonic-spinor residual above threshold");

  const auto& f = entropy.minimizer.f;
  SpinorField psi = phi;
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < nn; ++i) psi.comp(c)[i] *= std::exp(0.5 * f[i]);

  // ||grad psi||^2_{L^2_f}: frame factor e^{-2u} cancels against dV = e^{2u} dx
  double energy_num = 0;
  for (int j = 0; j < 2; ++j) {
    SpinorField nab = conformal_spin_derivative(rep, g, psi, j);
    for (std::size_t i = 0; i < nn; ++i) {
      double w = std::exp(-f[i]);
      for (int c = 0; c < 2; ++c) energy_num += std::norm(nab.comp(c)[i]) * w;
    }
  }
  double energy_den = 0;
  for (std::size_t i = 0; i < nn; ++i) {
    double w = std::exp(-f[i] + 2.0 * g.u[i]);
    for (int c = 0; c < 2; ++c) energy_den += std::norm(psi.comp(c)[i]) * w;
  }
  rep_out.lambda = entropy.lambda;
  rep_out.spinor_energy = -4.0 * (energy_num * cell) / (energy_den * cell);
  rep_out.rel_error =
      std::abs(rep_out.spinor_energy - rep_out.lambda) / std::max(std::abs(rep_out.lambda), 1e-8);
  return rep_out;
}

// ---------------------------------------------------------------------------
// U(1)-twisted operators and the monopole algebra
// ---------------------------------------------------------------------------

std::vector<Field> curvature_fields(const U1Connection& A) {
  std::vector<Field> F;
  for (int j = 0; j < 4; ++j)
    for (int k = j + 1; k < 4; ++k) {
      Field f = spectral::derivative(A.comps[k], j);
      Field g = spectral::derivative(A.comps[j], k);
      for (std::size_t i = 0; i < f.v.size(); ++i) f.v[i] -= g.v[i];
      F.push_back(std::move(f));
    }
  return F;
}

double curvature_closedness_residual(const U1Connection& A) {
  auto F = curvature_fields(A);
  auto at = [&](int j, int k) -> const Field& {
    // (j,k) with j<k indexes into the packed upper triangle
    int idx = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) {
        if (a == j && b == k) return F[idx];
        ++idx;
      }
    throw std::logic_error("bad index");
  };
  double worst = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k) {
        Field a = spectral::derivative(at(j, k), i);
        Field b = spectral::derivative(at(i, k), j);
        Field c = spectral::derivative(at(i, j), k);
        for (std::size_t idx = 0; idx < a.v.size(); ++idx)
          worst = std::max(worst, std::abs(a.v[idx] - b.v[idx] + c.v[idx]));
      }
  return worst;
}

namespace {

// covariant derivative (d_j + i A_j) psi
SpinorField cov_derivative(const U1Connection& A, const SpinorField& psi, int j) {
  SpinorField out = spectral::derivative(psi, j);
  const std::size_t nn = psi.grid.nodes();
  for (int c = 0; c < psi.comps; ++c) {
    cplx* oc = out.comp(c);
    const cplx* pc = psi.comp(c);
    for (std::size_t i = 0; i < nn; ++i) oc[i] += I * A.comps[j].v[i].real() * pc[i];
  }
  return out;
}

SpinorField twisted_weighted_dirac(const CliffordRep& rep, const U1Connection& A,
                                   const SpinorField& psi, const std::vector<Field>& grad_f) {
  SpinorField out = zero_like(psi);
  for (int j = 0; j < 4; ++j) {
    SpinorField d = cov_derivative(A, psi, j);
    accumulate_matrix(out, rep.gammas[j], d, 1.0);
    accumulate_matrix_mul(out, rep.gammas[j], grad_f[j], psi, -0.5);
  }
  return out;
}

}  // namespace

double check_twisted_sl(const CliffordRep& rep, const U1Connection& A, const Field& f,
                        const SpinorField& psi, double curvature_scale) {
  if (rep.dim != 4) throw std::invalid_argument("check_twisted_sl: needs n = 4");
  if (!A.fluxes.isZero())
    throw std::invalid_argument("check_twisted_sl: nonzero flux sectors are unsupported here");
  require_same_grid(psi.grid, f.grid, "check_twisted_sl");

  std::vector<Field> grad_f = spectral::gradient(f);
  SpinorField lhs =
      twisted_weighted_dirac(rep, A, twisted_weighted_dirac(rep, A, psi, grad_f), grad_f);

  const std::size_t nn = psi.grid.nodes();
  Field lapf = spectral::laplacian(f);
  std::vector<double> Rf(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    double g2 = 0;
    for (int j = 0; j < 4; ++j) g2 += grad_f[j].v[i].real() * grad_f[j].v[i].real();
    Rf[i] = 2.0 * lapf.v[i].real() - g2;
  }

  // -Delta_{A,f} psi = -(sum_j cov_j cov_j - grad f . cov) psi
  SpinorField rhs = zero_like(psi);
  for (int j = 0; j < 4; ++j) {
    SpinorField t = cov_derivative(A, psi, j);
    SpinorField tt = cov_derivative(A, t, j);
    for (std::size_t i = 0; i < psi.v.size(); ++i) rhs.v[i] -= tt.v[i];
    for (int c = 0; c < psi.comps; ++c) {
      cplx* rc = rhs.comp(c);
      const cplx* tc = t.comp(c);
      for (std::size_t i = 0; i < nn; ++i) rc[i] += grad_f[j].v[i].real() * tc[i];
    }
  }
  for (int c = 0; c < psi.comps; ++c) {
    cplx* rc = rhs.comp(c);
    const cplx* pc = psi.comp(c);
    for (std::size_t i = 0; i < nn; ++i) rc[i] += 0.25 * Rf[i] * pc[i];
  }

  // curvature endomorphism i sum_{j<k} F_jk g_j g_k, i.e. (1/2) F_det with F_det = 2 i dA
  auto F = curvature_fields(A);
  int idx = 0;
  for (int j = 0; j < 4; ++j)
    for (int k = j + 1; k < 4; ++k, ++idx) {
      Eigen::MatrixXcd G = rep.gammas[j] * rep.gammas[k];
      accumulate_matrix_mul(rhs, G, F[idx], psi, curvature_scale * I);
    }

  return max_abs(sub(lhs, rhs));
}

double wedge_integral(const Eigen::Matrix4d& F, const Eigen::Matrix4d& G,
                      std::array<double, 4> lengths) {
  // coefficient of dx0^dx1^dx2^dx3 in F ^ G, summed over disjoint index pairs
  auto perm_sign = [](int a, int b, int c, int d) {
    int p[4] = {a, b, c, d};
    int sign = 1;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (p[i] > p[j]) {
          std::swap(p[i], p[j]);
          sign = -sign;
        }
    return sign;
  };
  double coeff = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = k + 1; l < 4; ++l) {
          if (k == i || k == j || l == i || l == j) continue;
          coeff += perm_sign(i, j, k, l) * F(i, j) * G(k, l);
        }
  double vol = 1;
  for (double L : lengths) vol *= L;
  return coeff * vol;
}

ChernWeilResult chern_weil_check(const Eigen::Matrix4i& fluxes, std::array<double, 4> lengths,
                                 int grid_n) {
  if (!(fluxes + fluxes.transpose()).isZero())
    throw std::invalid_argument("chern_weil_check: fluxes must be antisymmetric");
  const double pi = std::numbers::pi;
  Eigen::Matrix4d F = Eigen::Matrix4d::Zero();
  for (int m = 0; m < 4; ++m)
    for (int nu = 0; nu < 4; ++nu)
      F(m, nu) = 2.0 * pi * fluxes(m, nu) / (lengths[m] * lengths[nu]);

  // quadrature over a (constant) grid field with the module's 2-form norm
  Torus g{4, grid_n, lengths};
  Eigen::Matrix4cd Fc = F.cast<cplx>();
  ChernWeilResult out;
  Eigen::Matrix4cd star = hodge_star(Fc);
  Eigen::Matrix4cd Fp = 0.5 * (Fc + star), Fm = 0.5 * (Fc - star);
  double integrand = two_form_norm_sq(Fp) - two_form_norm_sq(Fm);
  double lhs = 0;
  for (std::size_t i = 0; i < g.nodes(); ++i) lhs += integrand;
  out.lhs = lhs * g.cell_volume();

  out.c1_sq = wedge_integral(F / (2.0 * pi), F / (2.0 * pi), lengths);
  out.rhs = 4.0 * pi * pi * out.c1_sq;
  return out;
}

MonopoleAlgebraReport monopole_algebra_check(const CliffordRep& rep, const Eigen::Vector4cd& psi,
                                             double f, double rel_tol) {
  MonopoleAlgebraReport out;
  Eigen::Matrix2cd q = std::exp(-f) * quadratic_map(rep, psi);
  out.F = solve_selfdual_for_endo(rep, q);

  double psi2 = psi.squaredNorm();
  out.psi_norm4 = std::exp(-2.0 * f) * psi2 * psi2;
  out.q_frobenius_sq = q.squaredNorm();
  out.form_norm_sq = two_form_norm_sq(out.F);
  Eigen::MatrixXcd act = two_form_action(rep, out.F);
  double act_frob = act.block<2, 2>(0, 0).squaredNorm();
  out.action_to_form = out.form_norm_sq > 0 ? act_frob / out.form_norm_sq : 4.0;

  const double scale = std::max(out.psi_norm4, 1e-30);
  bool ok = std::abs(out.q_frobenius_sq - 0.5 * out.psi_norm4) <= rel_tol * scale;
  ok = ok && std::abs(act_frob - out.q_frobenius_sq) <= rel_tol * scale;
  ok = ok && std::abs(out.action_to_form - 4.0) <= rel_tol * 4.0;
  ok = ok && std::abs(out.psi_norm4 - 8.0 * out.form_norm_sq) <= rel_tol * scale;
  out.pass = ok;
  return out;
}

}  // namespace spinflow

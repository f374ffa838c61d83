#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace spinflow {

using cplx = std::complex<double>;

// Irreducible complex Clifford representation in the chiral (Weyl) basis,
// convention  g_i g_j + g_j g_i = -2 delta_ij.  Entries lie in {0, +-1, +-i},
// so all algebra identities are exact in double precision and are checked
// with exact comparisons, not tolerances.
struct CliffordRep {
  int dim = 0;                           // manifold dimension, 2, 3 or 4
  std::vector<Eigen::MatrixXcd> gammas;  // dim matrices of size rep_dim()

  int rep_dim() const { return dim == 0 ? 0 : 1 << (dim / 2); }
};

// Builds the representation for n in {2,3,4}; throws std::invalid_argument
// otherwise.  For even n the complex volume element is diag(+1,...,-1,...),
// so the chirality blocks are explicit.
CliffordRep build_rep(int n);

// omega_C = i^{floor((n+1)/2)} g_1 ... g_n
Eigen::MatrixXcd volume_element(const CliffordRep& rep);

// v . s with v a real n-vector; unitary for |v| = 1.
Eigen::VectorXcd clifford_mul(const CliffordRep& rep, const Eigen::VectorXd& v,
                              const Eigen::VectorXcd& s);

// (P+, P-) = ((1 +- omega_C)/2); even n only.
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> chirality_projectors(const CliffordRep& rep);

// Clifford action sum_{i<j} F_ij g_i g_j of the 2-form F = sum_{i<j} F_ij e^i ^ e^j.
// F may be complex (a U(1) curvature enters as i * dA); it must be antisymmetric.
Eigen::MatrixXcd two_form_action(const CliffordRep& rep, const Eigen::MatrixXcd& F);

// (psi (x) psi^*)^o on the W+ block: psi (x) psi^* - |psi|^2/2, traceless Hermitian
// with eigenvalues +-|psi|^2/2.  psi must be a positive-chirality spinor (n = 4).
Eigen::Matrix2cd quadratic_map(const CliffordRep& rep, const Eigen::Vector4cd& psi);

// Orthonormal-in-Frobenius basis of self-dual 2-forms for n = 4, as antisymmetric
// 4x4 coefficient matrices: e12+e34, e13+e42, e14+e23 (|.|^2 = 2 each).
std::vector<Eigen::Matrix4d> selfdual_basis();

// Unique (complex) self-dual F with two_form_action(F)|_{W+} = endo.
// Throws if the residual of the solve is not at machine level, which would
// signal a broken chirality convention.
Eigen::Matrix4cd solve_selfdual_for_endo(const CliffordRep& rep, const Eigen::Matrix2cd& endo);

// |F|^2 = sum_{i<j} |F_ij|^2 (no double counting).
double two_form_norm_sq(const Eigen::Matrix4cd& F);

// Hodge star on 2-form coefficients in flat orthonormal coordinates.
Eigen::Matrix4cd hodge_star(const Eigen::Matrix4cd& F);

// Exact equality helpers for the integer/half-integer matrices above.
bool exactly_equal(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);
bool exactly_zero(const Eigen::MatrixXcd& a);

}  // namespace spinflow

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinflow/clifford.hpp"
#include "spinflow/entropyflow.hpp"
#include "spinflow/torus_grid.hpp"

namespace spinflow {

// ---------------------------------------------------------------------------
// Flat-torus Dirac operators (T^2 and T^4), with weight and U(1) twist.
// ---------------------------------------------------------------------------

// D psi = sum_j g_j d_j psi with spectral derivatives respecting the twist.
SpinorField dirac(const CliffordRep& rep, const SpinorField& psi);

// Pointwise Clifford multiplication by a (real or complex) vector field.
SpinorField clifford_mul_field(const CliffordRep& rep, const std::vector<Field>& vec,
                               const SpinorField& psi);

// D_f psi = D psi - (1/2) (grad f) . psi.  Precomputes grad f once.
class WeightedDirac {
 public:
  WeightedDirac(const CliffordRep& rep, const Field& f);
  SpinorField operator()(const SpinorField& psi) const;
  const std::vector<Field>& grad_f() const { return grad_f_; }

 private:
  const CliffordRep& rep_;
  std::vector<Field> grad_f_;
};

SpinorField weighted_dirac(const CliffordRep& rep, const SpinorField& psi, const Field& f);

// Discrete weighted inner product <psi, phi>_f = sum <psi,phi> e^{-f} cell.
cplx weighted_inner(const SpinorField& a, const SpinorField& b, const Field& f);
double weighted_norm_sq(const SpinorField& a, const Field& f);

// ---------------------------------------------------------------------------
// Identity residuals (max-norm unless stated).  All hold to spectral accuracy
// for band-limited fields; the tolerances live in the test/verify tables.
// ---------------------------------------------------------------------------

// D_f^2 psi - (-Delta_f psi + (1/4) R_f psi), flat background (R_f = 2 Df - |grad f|^2).
double check_weighted_sl(const CliffordRep& rep, const Field& f, const SpinorField& psi);

// |<psi, D_f phi>_f - <D_f psi, phi>_f|
double check_weighted_ibp(const CliffordRep& rep, const Field& f, const SpinorField& psi,
                          const SpinorField& phi);

// |(1/4) int R_f |psi|^2 e^{-f} - int (|D_f psi|^2 - |grad psi|^2) e^{-f}|
double check_energy_identity(const CliffordRep& rep, const Field& f, const SpinorField& psi);

// [D_f, d_j] psi - (1/2) (Hess f e_j) . psi
double check_weighted_ricci_identity(const CliffordRep& rep, const Field& f,
                                     const SpinorField& psi, int axis);

// Pointwise identity (1/4)|Hess f|^2 |psi|^2 = sum_j |D_f d_j psi|^2 for the
// weighted-harmonic spinor psi = e^{f/2} psi0; returns max abs deviation.
double check_harmonic_ricci_pointwise(const CliffordRep& rep, const Field& f);

// Two formulas for D_f: (D - (1/2)(grad f).) psi vs e^{f/2} D(e^{-f/2} psi).
double check_weighted_dirac_conjugation(const CliffordRep& rep, const Field& f,
                                        const SpinorField& psi);

// ---------------------------------------------------------------------------
// Spectra
// ---------------------------------------------------------------------------

// Lowest `count` eigenvalues of D^2 (f absent; exact momentum-lattice values)
// or of D_f^2 in L^2_f (f present; block iterative solver).
std::vector<double> dirac_spectrum(const CliffordRep& rep, const Torus& grid,
                                   std::array<double, 4> twist, const std::optional<Field>& f,
                                   int count);

// Brute-force lattice minimum of |2 pi (k + delta)/L|^2 (test oracle for lambda_1).
double lattice_lambda1(const Torus& grid, std::array<double, 4> twist);

struct SolitonScalingRow {
  double tau = 0, lambda_scaled = 0, lambda_reference = 0, rel_error = 0;
};
struct SolitonScalingReport {
  std::vector<SolitonScalingRow> rows;
  double max_rel_error = 0;
  bool decreasing_along_expansion = false;  // lambda_1(t g) strictly decreasing in t
};

// lambda_1(tau g) vs lambda_1(g)/tau; throws if lambda_1(g) = 0 (harmonic
// spinors exist, the scaling statement is vacuous).
SolitonScalingReport soliton_scaling_check(const CliffordRep& rep, const Torus& grid,
                                           std::array<double, 4> twist,
                                           const std::vector<double>& scales);

// ---------------------------------------------------------------------------
// Conformal T^2: harmonic spinor energy vs the entropy eigenvalue.
// ---------------------------------------------------------------------------

// Spin covariant derivative of the conformal metric e^{2u} g_flat in the
// coordinate direction `axis` (connection coefficient validated by the
// D_g phi ~ 0 residual, see tests).
SpinorField conformal_spin_derivative(const CliffordRep& rep, const ConformalTorusMetric& g,
                                      const SpinorField& psi, int axis);

// Dirac operator of the conformal metric.
SpinorField conformal_dirac(const CliffordRep& rep, const ConformalTorusMetric& g,
                            const SpinorField& psi);

struct Theorem31Report {
  double lambda = 0;             // entropy eigenvalue
  double spinor_energy = 0;      // -4 ||grad psi||^2_f / ||psi||^2_f
  double rel_error = 0;
  double harmonic_residual = 0;  // ||D_g phi|| / ||phi|| in L^2(dV)
  int grid_n = 0;
};

// Builds the harmonic spinor phi = e^{-u/2} psi_0, twists it to psi = e^{f/2} phi
// with f the entropy minimizer, and compares the weighted spinor energy with
// lambda(g).  Throws if the harmonic residual exceeds `harmonic_tol`.
Theorem31Report theorem31_check(const ConformalTorusMetric& g, double harmonic_tol = 1e-6);

// ---------------------------------------------------------------------------
// U(1)-twisted operators on T^4 and the monopole algebra.
// ---------------------------------------------------------------------------

// Topologically trivial part as periodic components; integer fluxes carry the
// harmonic part (used only by the curvature-level Chern-Weil check).
struct U1Connection {
  std::array<Field, 4> comps;
  Eigen::Matrix4i fluxes = Eigen::Matrix4i::Zero();
};

// F_jk = d_j A_k - d_k A_j for the periodic part (upper triangle, j < k).
std::vector<Field> curvature_fields(const U1Connection& A);

// Residual of D_{A,f}^2 psi = -Delta_{A,f} psi + (1/4) R_f psi + (1/2) F_det .psi,
// where the determinant-line curvature form is 2 dA (spinors couple with
// charge 1), i.e. the curvature endomorphism is two_form_action(i dA).
// `curvature_scale` exists for the negative-control test only.
double check_twisted_sl(const CliffordRep& rep, const U1Connection& A, const Field& f,
                        const SpinorField& psi, double curvature_scale = 1.0);

// dF = 0: max norm of the cyclic sum d_i F_jk + d_j F_ki + d_k F_ij.
double curvature_closedness_residual(const U1Connection& A);

struct ChernWeilResult {
  double lhs = 0;   // integral (|F+|^2 - |F-|^2) dV by grid quadrature
  double rhs = 0;   // 4 pi^2 c1^2 from the wedge-product oracle
  double c1_sq = 0;
};

// Constant harmonic representative F_mn = 2 pi n_mn / (L_m L_n).
ChernWeilResult chern_weil_check(const Eigen::Matrix4i& fluxes, std::array<double, 4> lengths,
                                 int grid_n = 4);

// Exact wedge-product oracle: integral of F ^ G over the torus for constant forms.
double wedge_integral(const Eigen::Matrix4d& F, const Eigen::Matrix4d& G,
                      std::array<double, 4> lengths);

struct MonopoleAlgebraReport {
  Eigen::Matrix4cd F;          // self-dual solution of F. = e^{-f} q(psi) on W+
  double psi_norm4 = 0;        // e^{-2f} |psi|^4
  double q_frobenius_sq = 0;   // |e^{-f} q(psi)|_F^2, equals psi_norm4 / 2
  double action_to_form = 0;   // |F.|_F^2 / |F|^2, the frozen constant 4
  double form_norm_sq = 0;     // |F|^2, equals psi_norm4 / 8
  bool pass = false;
};

// Pointwise weighted monopole algebra: solves the self-dual equation and
// verifies the frozen norm constants (1/2, 4, 8).
MonopoleAlgebraReport monopole_algebra_check(const CliffordRep& rep, const Eigen::Vector4cd& psi,
                                             double f, double rel_tol = 1e-10);

}  // namespace spinflow

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinflow/torus_grid.hpp"

namespace spinflow {

// Conformal metric g = e^{2u} g_flat on the torus T^2 of side lengths (l1, l2),
// represented by grid samples of u on an n x n periodic grid (axis 0 slowest).
struct ConformalTorusMetric {
  int n = 0;
  double l1 = 1, l2 = 1;
  std::vector<double> u;

  ConformalTorusMetric() = default;
  ConformalTorusMetric(int n_, double l1_, double l2_)
      : n(n_), l1(l1_), l2(l2_), u(std::size_t(n_) * n_, 0.0) {}

  Torus grid() const { return Torus{2, n, {l1, l2, 1, 1}}; }
  double volume() const;  // integral of e^{2u} dx
};

// Weight f defining the measure e^{-f} dV, with its normalization mode.
struct WeightField {
  enum class Norm { UnitMass, TotalVolume };
  std::vector<double> f;
  Norm mode = Norm::UnitMass;
};

struct EntropyResult {
  double lambda = 0;
  std::vector<double> ground_state;  // u1 > 0, normalized: integral of u1^2 dV = 1
  WeightField minimizer;             // f = -2 log u1, shifted per mode
  int iterations = 0;
  double residual = 0;
};

struct EntropySolveOptions {
  double tol = 1e-9;
  int max_iterations = 400;
  WeightField::Norm norm_mode = WeightField::Norm::UnitMass;
  const EntropyResult* warm_start = nullptr;
};

// Gauss curvature scalar R = -2 e^{-2u} (Delta_flat u); integral of R dV vanishes.
std::vector<double> scalar_curvature(const ConformalTorusMetric& g);

// Smallest eigenvalue of -4 Delta_g + R in L^2(dV_g), positive ground state and
// the entropy minimizer f = -2 log u1.  Throws on non-convergence and when the
// ground state dips below 1e-12 (insufficient resolution to represent f).
EntropyResult lambda_entropy(const ConformalTorusMetric& g, const EntropySolveOptions& opts = {});

// Dense generalized eigendecomposition at n <= 32, the solver oracle.
double lambda_entropy_dense(const ConformalTorusMetric& g);

// R_f = R + 2 Delta_g f - |grad f|_g^2; the equivalent weighted-Laplacian form
// is computed alongside and the two are asserted to agree.
std::vector<double> weighted_scalar(const ConformalTorusMetric& g, const WeightField& f);

// Symmetric 2-tensor grid field in coordinate components.
struct SymmetricTensorField2 {
  std::vector<double> t11, t12, t22;
};

// Ric_f = (R/2) g + Hess_g f (Ricci is (R/2) g in dimension two).
SymmetricTensorField2 weighted_ricci(const ConformalTorusMetric& g, const WeightField& f);

// tr_g and |.|_g^2 for tensors produced above.
std::vector<double> tensor_trace(const ConformalTorusMetric& g, const SymmetricTensorField2& T);
std::vector<double> tensor_norm_sq(const ConformalTorusMetric& g, const SymmetricTensorField2& T);

struct FlowSample2 {
  double t = 0;
  ConformalTorusMetric metric;
  EntropyResult entropy;
  double volume = 0, min_R = 0, max_R = 0, stddev_Rf = 0;
};

struct Flow2Options {
  int sample_every = 100;    // record every k-th step (plus t = 0 and t_end)
  double cfl_constant = 0.2; // dt must stay below C (L/N)^2 e^{2 min u}
  EntropySolveOptions entropy;
};

// Conformal-gauge Ricci flow du/dt = e^{-2u} Delta_flat u; the normalized
// variant adds the average-scalar term Rbar/2 (identically ~0 on T^2).
// Throws on CFL violation.
std::vector<FlowSample2> ricci_flow_2d(const ConformalTorusMetric& g0, double t_end, double dt,
                                       bool normalized, const Flow2Options& opts = {});

struct DerivativeCheckRow {
  double t = 0, dlambda_dt = 0, ricci_integral = 0, rel_error = 0;
};
struct DerivativeCheckReport {
  std::vector<DerivativeCheckRow> rows;  // interior samples
  double max_rel_error = 0;              // over all interior samples
  double max_rel_error_mid = 0;          // over the middle half of the time range
};

// Centered-difference d lambda/dt against 2 integral |Ric_f|^2 e^{-f} dV.
// The trajectory must come from the unnormalized flow with >= 3 samples.
DerivativeCheckReport perelman_derivative_check(const std::vector<FlowSample2>& traj);

// lambda(g) Vol(g) in dimension two (scale invariant).
double normalized_lambda(const ConformalTorusMetric& g);
double normalized_lambda(const ConformalTorusMetric& g, const EntropyResult& e);

struct CauchySchwarzReport {
  double lhs = 0, rhs = 0;
  bool holds = false;
};

// Vol (int phi^4 dV / int phi^2 dV)^2 >= int phi^4 dV for phi >= 0, phi != 0.
CauchySchwarzReport cauchy_schwarz_chain_check(const std::vector<double>& phi,
                                               const ConformalTorusMetric& g);

// Guard shared by lambda_entropy: rejects ground states that cannot define f.
void enforce_positive_ground_state(const std::vector<double>& u1);

// Quadrature: integral of w dV_g (trapezoid = exact for trig polynomials).
double integrate_dv(const ConformalTorusMetric& g, const std::vector<double>& w);

// CSV with columns t,lambda,normalized_lambda,vol,min_R,max_R,stddev_Rf.
std::string trajectory_csv(const std::vector<FlowSample2>& traj);

// Binary grid snapshot: magic "SPFG", u32 endianness tag 0x01020304, u32 N,
// f64 L1, f64 L2, then N*N f64 samples of u.
void write_metric_snapshot(const std::string& path, const ConformalTorusMetric& g);
ConformalTorusMetric read_metric_snapshot(const std::string& path);

}  // namespace spinflow

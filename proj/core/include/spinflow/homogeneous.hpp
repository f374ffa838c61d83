#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace spinflow {

// Diagonal left-invariant metric on S^3 in the frame with bracket relations
// [e_i, e_j] = 2 e_k (cyclic); the Berger family is a = kappa^2, b = c = 1.
struct LeftInvariantMetric3 {
  double a = 1, b = 1, c = 1;

  double volume_factor() const;  // sqrt(abc), proportional to Vol(S^3, g)
  double kappa() const;          // sqrt(a / sqrt(bc)), = kappa for Berger metrics
};

// Ricci tensor in the frame {e_1,e_2,e_3} (diagonal there), computed from the
// structure constants via the Koszul formula, no closed forms copied in.
Eigen::Matrix3d ricci_from_structure_constants(const LeftInvariantMetric3& m);

// Scalar curvature of any diagonal metric (trace of the above with g^{-1}).
double scalar_curvature(const LeftInvariantMetric3& m);

// R = 2(4 - kappa^2) for the Berger metric; throws for kappa <= 0.
double scalar_curvature_berger(double kappa);

// All pairs 1 <= p,q <= search_bound with |kappa^2 - 2 sqrt(4pq kappa^2 + (p-q)^2)| <= tol,
// in lexicographic order.  When kappa^2 is an integer the condition is decided
// in exact integer arithmetic.
std::vector<std::pair<int, int>> harmonic_spinor_solutions(double kappa, int search_bound,
                                                           double tol = 1e-9);

struct FlowSample3 {
  double t = 0;
  LeftInvariantMetric3 metric;
  double scalar_curvature = 0;
  int spinor_pairs = 0;
};

struct FlowTrajectory3 {
  std::vector<FlowSample3> samples;
  double max_volume_drift = 0;  // worst per-step drift before renormalization
};

struct FlowOptions {
  double volume_drift_tol = 1e-5;  // per accepted sub-step, pre-renormalization
  double min_substep = 1e-12;
  int spinor_search_bound = 1000;
  double spinor_tol = 1e-9;
};

// Volume-normalized Ricci flow d(a,b,c)/dt = -2 Ric_frame + (2/3) R (a,b,c),
// RK4 sub-steps inside each macro step dt, rejecting sub-steps whose volume
// drift exceeds the tolerance; the volume is renormalized after each accepted
// sub-step.  Samples are recorded at t = 0 and after each macro step.
FlowTrajectory3 normalized_ricci_flow(const LeftInvariantMetric3& m0, double t_end, double dt,
                                      const FlowOptions& opts = {});

// CSV with columns t,a,b,c,kappa,R,n_solutions (17 significant digits).
std::string trajectory_csv(const FlowTrajectory3& traj);

}  // namespace spinflow

#include "spinflow/homogeneous.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "spinflow/io.hpp"

namespace spinflow {

double LeftInvariantMetric3::volume_factor() const { return std::sqrt(a * b * c); }
double LeftInvariantMetric3::kappa() const { return std::sqrt(a / std::sqrt(b * c)); }

namespace {

void validate(const LeftInvariantMetric3& m) {
  if (!(m.a > 0) || !(m.b > 0) || !(m.c > 0))
    throw std::invalid_argument("LeftInvariantMetric3: coefficients must be positive");
}

int levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  if ((i + 1) % 3 == j) return 1;  // cyclic (i, i+1, i+2)
  return -1;
}

}  // namespace

Eigen::Matrix3d ricci_from_structure_constants(const LeftInvariantMetric3& m) {
  validate(m);
  const double g[3] = {m.a, m.b, m.c};

  // Structure constants in the orthonormalized frame eb_i = e_i / sqrt(g_i):
  // [eb_i, eb_j] = cb^k_{ij} eb_k.
  double cb[3][3][3] = {};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        int eps = levi_civita(i, j, k);
        if (eps != 0) cb[k][i][j] = 2.0 * eps * std::sqrt(g[k] / (g[i] * g[j]));
      }

  // Koszul: 2 <nabla_{eb_i} eb_j, eb_k> = cb^k_{ij} - cb^i_{jk} + cb^j_{ki}.
  double gamma[3][3][3];  // gamma[k][i][j] = <nabla_i eb_j, eb_k>
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        gamma[k][i][j] = 0.5 * (cb[k][i][j] - cb[i][j][k] + cb[j][k][i]);

  // R(eb_i, eb_j) eb_k = nabla_i nabla_j eb_k - nabla_j nabla_i eb_k - nabla_{[eb_i,eb_j]} eb_k.
  auto riemann = [&](int i, int j, int k, int l) {
    double r = 0;
    for (int mm = 0; mm < 3; ++mm) {
      r += gamma[mm][j][k] * gamma[l][i][mm];
      r -= gamma[mm][i][k] * gamma[l][j][mm];
      r -= cb[mm][i][j] * gamma[l][mm][k];
    }
    return r;
  };

  Eigen::Matrix3d ric_on = Eigen::Matrix3d::Zero();  // in the orthonormal frame
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      double s = 0;
      for (int i = 0; i < 3; ++i) s += riemann(i, j, k, i);
      ric_on(j, k) = s;
    }

  // Back to the unnormalized frame: Ric(e_i, e_j) = sqrt(g_i g_j) Ric(eb_i, eb_j).
  Eigen::Matrix3d ric;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) ric(i, j) = std::sqrt(g[i] * g[j]) * ric_on(i, j);
  return ric;
}

double scalar_curvature(const LeftInvariantMetric3& m) {
  Eigen::Matrix3d ric = ricci_from_structure_constants(m);
  return ric(0, 0) / m.a + ric(1, 1) / m.b + ric(2, 2) / m.c;
}

double scalar_curvature_berger(double kappa) {
  if (!(kappa > 0)) throw std::invalid_argument("scalar_curvature_berger: kappa must be positive");
  return 2.0 * (4.0 - kappa * kappa);
}

std::vector<std::pair<int, int>> harmonic_spinor_solutions(double kappa, int search_bound,
                                                           double tol) {
  if (search_bound < 1) throw std::invalid_argument("harmonic_spinor_solutions: bound >= 1");
  if (!(tol > 0)) throw std::invalid_argument("harmonic_spinor_solutions: tol > 0");
  std::vector<std::pair<int, int>> out;
  const double k2 = kappa * kappa;

  // 2 sqrt(4pq k^2 + (p-q)^2) >= 4 kappa sqrt(pq), so pq is bounded on solutions.
  double root = (k2 + tol) / (4.0 * kappa);
  long long pq_max = (long long)(root * root + 1.0);

  const double k2r = std::round(k2);
  const bool integer_k2 = std::abs(k2 - k2r) < 1e-12 && std::abs(k2) < 9.0e15;
  const long long m = (long long)k2r;

  for (int p = 1; p <= search_bound; ++p) {
    if ((long long)p > pq_max) break;
    for (int q = 1; q <= search_bound; ++q) {
      if ((long long)p * q > pq_max) break;
      if (integer_k2) {
        // kappa^2 = 2 sqrt(4pq kappa^2 + (p-q)^2)  <=>  m^2 = 16 pq m + 4 (p-q)^2
        long long d = (long long)p - q;
        if (m * m == 16ll * p * q * m + 4ll * d * d) out.emplace_back(p, q);
      } else {
        double rhs = 2.0 * std::sqrt(4.0 * p * q * k2 + double((long long)(p - q) * (p - q)));
        if (std::abs(k2 - rhs) <= tol) out.emplace_back(p, q);
      }
    }
  }
  return out;
}

namespace {

using Vec3 = Eigen::Vector3d;

Vec3 flow_rhs(const Vec3& x) {
  LeftInvariantMetric3 m{x[0], x[1], x[2]};
  Eigen::Matrix3d ric = ricci_from_structure_constants(m);
  double R = ric(0, 0) / m.a + ric(1, 1) / m.b + ric(2, 2) / m.c;
  Vec3 dx;
  dx[0] = -2.0 * ric(0, 0) + (2.0 / 3.0) * R * m.a;
  dx[1] = -2.0 * ric(1, 1) + (2.0 / 3.0) * R * m.b;
  dx[2] = -2.0 * ric(2, 2) + (2.0 / 3.0) * R * m.c;
  return dx;
}

Vec3 rk4_step(const Vec3& x, double h) {
  Vec3 k1 = flow_rhs(x);
  Vec3 k2 = flow_rhs(x + 0.5 * h * k1);
  Vec3 k3 = flow_rhs(x + 0.5 * h * k2);
  Vec3 k4 = flow_rhs(x + h * k3);
  return x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
}

}  // namespace

FlowTrajectory3 normalized_ricci_flow(const LeftInvariantMetric3& m0, double t_end, double dt,
                                      const FlowOptions& opts) {
  validate(m0);
  if (!(dt > 0)) throw std::invalid_argument("normalized_ricci_flow: dt must be positive");

  const double vol0 = m0.volume_factor();
  FlowTrajectory3 traj;

  auto record = [&](double t, const Vec3& x) {
    LeftInvariantMetric3 m{x[0], x[1], x[2]};
    FlowSample3 s;
    s.t = t;
    s.metric = m;
    s.scalar_curvature = scalar_curvature(m);
    s.spinor_pairs = (int)harmonic_spinor_solutions(m.kappa(), opts.spinor_search_bound,
                                                    opts.spinor_tol)
                         .size();
    traj.samples.push_back(s);
  };

  Vec3 x(m0.a, m0.b, m0.c);
  record(0.0, x);

  const long long steps = (long long)std::ceil(t_end / dt - 1e-9);
  for (long long k = 0; k < steps; ++k) {
    double macro = std::min(dt, t_end - double(k) * dt);
    double done = 0;
    double h = macro;
    while (done < macro - 1e-15 * macro) {
      h = std::min(h, macro - done);
      Vec3 y;
      bool usable = true;
      try {
        y = rk4_step(x, h);
        usable = y[0] > 0 && y[1] > 0 && y[2] > 0;
      } catch (const std::invalid_argument&) {
        usable = false;  // an RK4 stage left the cone of metrics
      }
      if (!usable) {
        h *= 0.5;
        if (h < opts.min_substep)
          throw std::runtime_error("normalized_ricci_flow: step size underflow");
        continue;
      }
      double vol = std::sqrt(y[0] * y[1] * y[2]);
      double drift = std::abs(vol / vol0 - 1.0);
      if (drift > opts.volume_drift_tol) {
        h *= 0.5;
        if (h < opts.min_substep)
          throw std::runtime_error(
              "normalized_ricci_flow: step rejected, volume drift persists at minimum step");
        continue;
      }
      // renormalize the volume after every accepted sub-step
      double scale = std::cbrt((vol0 * vol0) / (vol * vol));
      x = y * scale;
      done += h;
      traj.max_volume_drift = std::max(traj.max_volume_drift, drift);
      if (drift < 0.1 * opts.volume_drift_tol) h *= 2.0;  // regrow toward the macro step
    }
    record(std::min(double(k + 1) * dt, t_end), x);
  }
  return traj;
}

std::string trajectory_csv(const FlowTrajectory3& traj) {
  std::ostringstream os;
  os << "t,a,b,c,kappa,R,n_solutions\n";
  for (const auto& s : traj.samples) {
    os << format_g17(s.t) << ',' << format_g17(s.metric.a) << ',' << format_g17(s.metric.b) << ','
       << format_g17(s.metric.c) << ',' << format_g17(s.metric.kappa()) << ','
       << format_g17(s.scalar_curvature) << ',' << s.spinor_pairs << '\n';
  }
  return os.str();
}

}  // namespace spinflow

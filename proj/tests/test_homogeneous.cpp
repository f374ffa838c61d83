#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <spinflow/homogeneous.hpp>
#include <spinflow/rng.hpp>

using namespace spinflow;

// ---------------------------------------------------------------------------
// Independent curvature oracle: brute-force Christoffel/curvature computation
// in an explicit coordinate chart on the group of unit quaternions, with the
// left-invariant metric diag(a,b,c) in the frame (p i, p j, p k).
// ---------------------------------------------------------------------------
namespace {

struct Quat {
  double w = 0, x = 0, y = 0, z = 0;
};

Quat mul(const Quat& a, const Quat& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}
Quat conj(const Quat& a) { return {a.w, -a.x, -a.y, -a.z}; }
Quat axis_exp(int axis, double t) {
  Quat q{std::cos(t), 0, 0, 0};
  double s = std::sin(t);
  if (axis == 0) q.x = s;
  if (axis == 1) q.y = s;
  if (axis == 2) q.z = s;
  return q;
}
Quat unit(int axis) { return axis_exp(axis, M_PI / 2); }  // pure i, j or k

// chart p(x) = exp(x0 i) exp(x1 j) exp(x2 k)
Quat chart(const double* x) {
  return mul(mul(axis_exp(0, x[0]), axis_exp(1, x[1])), axis_exp(2, x[2]));
}
Quat chart_deriv(const double* x, int mu) {
  Quat a = axis_exp(0, x[0]), b = axis_exp(1, x[1]), c = axis_exp(2, x[2]);
  if (mu == 0) return mul(mul(mul(a, unit(0)), b), c);
  if (mu == 1) return mul(mul(a, mul(b, unit(1))), c);
  return mul(mul(a, b), mul(c, unit(2)));
}

// coordinate metric g_{mu nu}(x) for frame weights (a, b, c)
void metric_at(const double* x, const double* w, double g[3][3]) {
  Quat p = chart(x);
  double frame[3][3];
  for (int mu = 0; mu < 3; ++mu) {
    Quat v = mul(conj(p), chart_deriv(x, mu));
    frame[mu][0] = v.x;
    frame[mu][1] = v.y;
    frame[mu][2] = v.z;
  }
  for (int mu = 0; mu < 3; ++mu)
    for (int nu = 0; nu < 3; ++nu) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += w[k] * frame[mu][k] * frame[nu][k];
      g[mu][nu] = s;
    }
}

// 4th-order central difference of a 9-component function of x
template <typename F>
void diff4(F&& f, const double* x, int mu, double h, double out[3][3]) {
  double xp[3], gp[3][3], gm[3][3], gp2[3][3], gm2[3][3];
  auto eval = [&](double shift, double g[3][3]) {
    for (int i = 0; i < 3; ++i) xp[i] = x[i];
    xp[mu] += shift;
    f(xp, g);
  };
  eval(h, gp);
  eval(-h, gm);
  eval(2 * h, gp2);
  eval(-2 * h, gm2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out[i][j] = (8 * (gp[i][j] - gm[i][j]) - (gp2[i][j] - gm2[i][j])) / (12 * h);
}

void christoffel_at(const double* x, const double* w, double h, double gam[3][3][3]) {
  double g[3][3], dg[3][3][3];
  metric_at(x, w, g);
  for (int mu = 0; mu < 3; ++mu)
    diff4([&](const double* y, double out[3][3]) { metric_at(y, w, out); }, x, mu, h, dg[mu]);
  Eigen::Matrix3d G;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) G(i, j) = g[i][j];
  Eigen::Matrix3d Ginv = G.inverse();
  for (int r = 0; r < 3; ++r)
    for (int m = 0; m < 3; ++m)
      for (int n = 0; n < 3; ++n) {
        double s = 0;
        for (int l = 0; l < 3; ++l)
          s += Ginv(r, l) * (dg[m][l][n] + dg[n][l][m] - dg[l][m][n]);
        gam[r][m][n] = 0.5 * s;
      }
}

Eigen::Matrix3d ricci_fd_oracle(double a, double b, double c) {
  const double w[3] = {a, b, c};
  const double x0[3] = {0, 0, 0};
  const double h1 = 4e-3, h2 = 4e-3;

  double gam0[3][3][3];
  christoffel_at(x0, w, h1, gam0);

  // d Gamma^r_{n s} / d x^m by central differences of the Christoffel field
  double dgam[3][3][3][3];
  for (int m = 0; m < 3; ++m) {
    double xp[3] = {0, 0, 0}, gp[3][3][3], gm[3][3][3], gp2[3][3][3], gm2[3][3][3];
    xp[m] = h2;
    christoffel_at(xp, w, h1, gp);
    xp[m] = -h2;
    christoffel_at(xp, w, h1, gm);
    xp[m] = 2 * h2;
    christoffel_at(xp, w, h1, gp2);
    xp[m] = -2 * h2;
    christoffel_at(xp, w, h1, gm2);
    for (int r = 0; r < 3; ++r)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          dgam[m][r][i][j] =
              (8 * (gp[r][i][j] - gm[r][i][j]) - (gp2[r][i][j] - gm2[r][i][j])) / (12 * h2);
  }

  // Ric_{s n} = d_m Gamma^m_{n s} - d_n Gamma^m_{m s} + G^m_{m l} G^l_{n s} - G^m_{n l} G^l_{m s}
  Eigen::Matrix3d ric;
  for (int s = 0; s < 3; ++s)
    for (int n = 0; n < 3; ++n) {
      double v = 0;
      for (int m = 0; m < 3; ++m) {
        v += dgam[m][m][n][s] - dgam[n][m][m][s];
        for (int l = 0; l < 3; ++l)
          v += gam0[m][m][l] * gam0[l][n][s] - gam0[m][n][l] * gam0[l][m][s];
      }
      ric(s, n) = v;
    }
  return ric;
}

}  // namespace

TEST_CASE("round metric: Ric = 2 g and R = 6") {
  Eigen::Matrix3d ric = ricci_from_structure_constants({1, 1, 1});
  CHECK((ric - 2.0 * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(scalar_curvature({1, 1, 1}) == doctest::Approx(6.0).epsilon(1e-13));
}

TEST_CASE("Berger scalar curvature matches 2(4 - kappa^2)") {
  for (double kappa : {0.5, 1.0, 2.0, 3.0, 16.0}) {
    CAPTURE(kappa);
    LeftInvariantMetric3 m{kappa * kappa, 1, 1};
    CHECK(std::abs(scalar_curvature(m) - scalar_curvature_berger(kappa)) <= 1e-10);
  }
  CHECK(scalar_curvature_berger(1) == doctest::Approx(6));
  CHECK(scalar_curvature_berger(2) == doctest::Approx(0));
  CHECK(scalar_curvature_berger(16) == doctest::Approx(-504));
  CHECK_THROWS_AS(scalar_curvature_berger(0), std::invalid_argument);
  CHECK_THROWS_AS(scalar_curvature_berger(-1), std::invalid_argument);
}

TEST_CASE("Koszul Ricci agrees with the finite-difference chart oracle") {
  const double cases[][3] = {{1.3, 0.7, 2.1}, {2.0, 1.0, 1.0}, {0.9, 1.4, 0.6}, {4.0, 1.0, 1.0}};
  for (auto& c : cases) {
    CAPTURE(c[0]);
    CAPTURE(c[1]);
    CAPTURE(c[2]);
    Eigen::Matrix3d koszul = ricci_from_structure_constants({c[0], c[1], c[2]});
    Eigen::Matrix3d fd = ricci_fd_oracle(c[0], c[1], c[2]);
    CHECK((koszul - fd).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("harmonic spinor pair counting") {
  // kappa = 4: exactly (1,1) since 2 sqrt(4*16) = 16
  auto s4 = harmonic_spinor_solutions(4.0, 100);
  REQUIRE(s4.size() == 1);
  CHECK(s4[0] == std::pair<int, int>(1, 1));

  // kappa < 4: RHS >= 4 kappa > kappa^2, no solutions
  CHECK(harmonic_spinor_solutions(2.0, 1000).empty());
  CHECK(harmonic_spinor_solutions(0.5, 1000).empty());
  for (int i = 1; i <= 100; ++i)
    CHECK(harmonic_spinor_solutions(4.0 * i / 101.0, 50).empty());

  // brute-force oracle: plain double loop, no pruning, no integer fast path
  auto brute = [](double kappa, int bound, double tol) {
    std::vector<std::pair<int, int>> out;
    double k2 = kappa * kappa;
    for (int p = 1; p <= bound; ++p)
      for (int q = 1; q <= bound; ++q)
        if (std::abs(k2 - 2.0 * std::sqrt(4.0 * p * q * k2 + (p - q) * (p - q))) <= tol)
          out.emplace_back(p, q);
    return out;
  };
  for (double kappa : {4.0, 8.0, 16.0, 5.7, 12.123}) {
    CAPTURE(kappa);
    CHECK(harmonic_spinor_solutions(kappa, 200) == brute(kappa, 200, 1e-9));
  }
  // kappa = 16 has the single pair (4,4)
  auto s16 = harmonic_spinor_solutions(16.0, 10000);
  REQUIRE(s16.size() == 1);
  CHECK(s16[0] == std::pair<int, int>(4, 4));

  CHECK_THROWS_AS(harmonic_spinor_solutions(4.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(harmonic_spinor_solutions(4.0, 10, -1.0), std::invalid_argument);
}

TEST_CASE("round metric is stationary under the normalized flow") {
  auto traj = normalized_ricci_flow({1, 1, 1}, 1.0, 1e-2);
  for (const auto& s : traj.samples) {
    CHECK(std::abs(s.metric.a - 1.0) <= 1e-12);
    CHECK(std::abs(s.metric.b - 1.0) <= 1e-12);
    CHECK(std::abs(s.metric.c - 1.0) <= 1e-12);
  }
}

TEST_CASE("Berger flow from kappa = 16 converges to round") {
  LeftInvariantMetric3 m0{256, 1, 1};
  auto traj = normalized_ricci_flow(m0, 10.0, 1e-2);
  const double vol0 = m0.volume_factor();

  bool saw_positive_R = false;
  double prev_kappa = 1e300;
  double prev_minR = -1e300;
  int last_nonzero_count = -1;
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    // volume preserved
    CHECK(std::abs(s.metric.volume_factor() / vol0 - 1.0) <= 1e-10);
    // Berger structure b = c preserved
    CHECK(std::abs(s.metric.b - s.metric.c) <= 1e-9 * s.metric.b);
    // kappa strictly decreasing until it hits the convergence noise floor
    double kappa = s.metric.kappa();
    if (prev_kappa < 1e300) {
      if (prev_kappa > 1.0 + 1e-6) CHECK(kappa < prev_kappa);
      CHECK(kappa <= prev_kappa + 1e-12);
    }
    prev_kappa = kappa;
    // min scalar curvature nondecreasing (homogeneous: R itself)
    CHECK(s.scalar_curvature >= prev_minR - 1e-8 * std::abs(prev_minR));
    prev_minR = s.scalar_curvature;
    if (s.scalar_curvature > 0) saw_positive_R = true;
    if (s.spinor_pairs > 0) last_nonzero_count = (int)i;
  }
  CHECK(saw_positive_R);
  // count starts at 1 (the pair (4,4)) and drops to 0 immediately after
  CHECK(traj.samples.front().spinor_pairs == 1);
  CHECK(last_nonzero_count == 0);
  CHECK(traj.samples.back().spinor_pairs == 0);
  // terminal distance to round
  const auto& fin = traj.samples.back().metric;
  double v = std::cbrt(fin.a * fin.b * fin.c);
  CHECK(std::abs(fin.a / v - 1.0) <= 1e-3);
  CHECK(std::abs(fin.b / v - 1.0) <= 1e-3);
  CHECK(std::abs(fin.c / v - 1.0) <= 1e-3);
}

TEST_CASE("flow rejects unusable inputs") {
  CHECK_THROWS_AS(normalized_ricci_flow({1, 1, 1}, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(normalized_ricci_flow({-1, 1, 1}, 1.0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(ricci_from_structure_constants({0, 1, 1}), std::invalid_argument);
}

TEST_CASE("trajectory CSV is deterministic and well-formed") {
  auto traj = normalized_ricci_flow({9, 1, 1}, 0.5, 1e-2);
  std::string csv1 = trajectory_csv(traj);
  auto traj2 = normalized_ricci_flow({9, 1, 1}, 0.5, 1e-2);
  CHECK(csv1 == trajectory_csv(traj2));
  CHECK(csv1.substr(0, csv1.find('\n')) == "t,a,b,c,kappa,R,n_solutions");
  std::size_t rows = std::count(csv1.begin(), csv1.end(), '\n');
  CHECK(rows == traj.samples.size() + 1);
}

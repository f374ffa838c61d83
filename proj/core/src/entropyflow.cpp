#include "spinflow/entropyflow.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "spinflow/io.hpp"
#include "spinflow/eigensolve.hpp"
#include "spinflow/spectral.hpp"

namespace spinflow {

namespace {

Field to_field(const Torus& g, const std::vector<double>& x) {
  Field f(g);
  for (std::size_t i = 0; i < x.size(); ++i) f.v[i] = cplx(x[i], 0.0);
  return f;
}

std::vector<double> re(const Field& f) {
  std::vector<double> out(f.v.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.v[i].real();
  return out;
}

std::vector<double> flat_laplacian(const Torus& g, const std::vector<double>& x) {
  return re(spectral::laplacian(to_field(g, x)));
}

}  // namespace

double ConformalTorusMetric::volume() const {
  double s = 0;
  for (double ui : u) s += std::exp(2.0 * ui);
  return s * grid().cell_volume();
}

double integrate_dv(const ConformalTorusMetric& g, const std::vector<double>& w) {
  double s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * std::exp(2.0 * g.u[i]);
  return s * g.grid().cell_volume();
}

std::vector<double> scalar_curvature(const ConformalTorusMetric& g) {
  std::vector<double> lap = flat_laplacian(g.grid(), g.u);
  std::vector<double> R(lap.size());
  for (std::size_t i = 0; i < R.size(); ++i) R[i] = -2.0 * std::exp(-2.0 * g.u[i]) * lap[i];
  return R;
}

void enforce_positive_ground_state(const std::vector<double>& u1) {
  double mn = u1.empty() ? 0.0 : *std::min_element(u1.begin(), u1.end());
  if (!(mn > 0))
    throw std::runtime_error("entropy ground state is not positive (solver failure)");
  if (mn < 1e-12)
    throw std::runtime_error(
        "entropy ground state reaches values below 1e-12; f = -2 log u1 would blow up "
        "(insufficient resolution)");
}

EntropyResult lambda_entropy(const ConformalTorusMetric& g, const EntropySolveOptions& opts) {
  const Torus grid = g.grid();
  const std::size_t nn = grid.nodes();
  const double cell = grid.cell_volume();

  // Generalized problem (-4 Delta + R e^{2u}) v = lambda e^{2u} v, symmetrized
  // with x = e^{u} v:  Ahat = e^{-u} (-4 Delta + V) e^{-u},  V = -2 Delta_flat u.
  std::vector<double> V = flat_laplacian(grid, g.u);
  for (auto& x : V) x *= -2.0;
  std::vector<double> s(nn), sinv(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    s[i] = std::exp(g.u[i]);
    sinv[i] = 1.0 / s[i];
  }

  using Mat = Eigen::MatrixXd;
  using Vec = Eigen::VectorXd;
  auto apply_one = [&](const Vec& x) {
    std::vector<double> col(nn);
    for (std::size_t i = 0; i < nn; ++i) col[i] = x[i] * sinv[i];
    std::vector<double> lap = flat_laplacian(grid, col);
    Vec y(nn);
    for (std::size_t i = 0; i < nn; ++i) y[i] = (-4.0 * lap[i] + V[i] * col[i]) * sinv[i];
    return y;
  };
  auto apply = [&](const Mat& X) {
    Mat Y(X.rows(), X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j) Y.col(j) = apply_one(X.col(j));
    return Y;
  };

  double rmin = 0;
  for (std::size_t i = 0; i < nn; ++i) rmin = std::min(rmin, V[i] * sinv[i] * sinv[i]);
  const double sigma = rmin - 1.0;  // below the spectrum: lambda >= min R
  const double pshift = 1.0 - rmin;
  auto prec_one = [&](const Vec& x) {
    Field hat(grid);
    for (std::size_t i = 0; i < nn; ++i) hat.v[i] = cplx(x[i], 0.0);
    spectral::fft(grid, hat.v.data(), true);
    std::size_t idx = 0;
    for (int k0 = 0; k0 < grid.n; ++k0)
      for (int k1 = 0; k1 < grid.n; ++k1, ++idx) {
        double sq = spectral::wavenumber_sq(grid, 0, k0, 0.0) +
                    spectral::wavenumber_sq(grid, 1, k1, 0.0);
        hat.v[idx] /= 4.0 * sq + pshift;
      }
    spectral::fft(grid, hat.v.data(), false);
    Vec y(nn);
    for (std::size_t i = 0; i < nn; ++i) y[i] = hat.v[i].real();
    return y;
  };
  auto solve = [&](const Vec& b) {
    Vec x = Vec::Zero(nn);
    auto op = [&](const Vec& v) { return Vec(apply_one(v) - sigma * v); };
    pcg<double>(op, prec_one, b, x, 1e-11, 1000);
    return x;
  };

  Mat X0(nn, 2);
  if (opts.warm_start && opts.warm_start->ground_state.size() == nn) {
    for (std::size_t i = 0; i < nn; ++i) X0(i, 0) = opts.warm_start->ground_state[i] * s[i];
  } else {
    for (std::size_t i = 0; i < nn; ++i) X0(i, 0) = s[i];  // exact ground state at u = const
  }
  std::size_t idx = 0;
  for (int a = 0; a < grid.n; ++a)
    for (int b = 0; b < grid.n; ++b, ++idx)
      X0(idx, 1) = std::cos(2 * M_PI * a / grid.n) + 0.5 * std::sin(2 * M_PI * b / grid.n);

  auto eig =
      inverse_subspace_smallest<double>(apply, solve, X0, 1, opts.tol, opts.max_iterations);
  if (!eig.converged) throw std::runtime_error("lambda_entropy: eigensolver did not converge");

  EntropyResult res;
  res.lambda = eig.values[0];
  res.iterations = eig.iterations;
  res.residual = eig.max_residual;

  // v = e^{-u} x, normalized to integral v^2 dV = sum x^2 * cell = 1.
  std::vector<double> v(nn);
  double norm2 = 0;
  for (std::size_t i = 0; i < nn; ++i) norm2 += eig.vectors(i, 0) * eig.vectors(i, 0);
  double scale = 1.0 / std::sqrt(norm2 * cell);
  double mean = 0;
  for (std::size_t i = 0; i < nn; ++i) mean += eig.vectors(i, 0);
  if (mean < 0) scale = -scale;
  for (std::size_t i = 0; i < nn; ++i) v[i] = eig.vectors(i, 0) * scale * sinv[i];
  enforce_positive_ground_state(v);
  res.ground_state = v;

  WeightField f;
  f.mode = opts.norm_mode;
  f.f.resize(nn);
  for (std::size_t i = 0; i < nn; ++i) f.f[i] = -2.0 * std::log(v[i]);
  if (opts.norm_mode == WeightField::Norm::TotalVolume) {
    double shift = std::log(g.volume());  // from mass 1 to mass Vol
    for (auto& x : f.f) x -= shift;
  }
  res.minimizer = std::move(f);
  return res;
}

double lambda_entropy_dense(const ConformalTorusMetric& g) {
  if (g.n > 32) throw std::invalid_argument("lambda_entropy_dense: oracle limited to n <= 32");
  const Torus grid = g.grid();
  const std::size_t nn = grid.nodes();
  std::vector<double> V = flat_laplacian(grid, g.u);
  for (auto& x : V) x *= -2.0;

  Eigen::MatrixXd A(nn, nn), B = Eigen::MatrixXd::Zero(nn, nn);
  std::vector<double> e(nn, 0.0);
  for (std::size_t j = 0; j < nn; ++j) {
    e[j] = 1.0;
    std::vector<double> lap = flat_laplacian(grid, e);
    for (std::size_t i = 0; i < nn; ++i) A(i, j) = -4.0 * lap[i];
    A(j, j) += V[j];
    B(j, j) = std::exp(2.0 * g.u[j]);
    e[j] = 0.0;
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()), B);
  return es.eigenvalues()[0];
}

std::vector<double> weighted_scalar(const ConformalTorusMetric& g, const WeightField& f) {
  const Torus grid = g.grid();
  if (f.f.size() != grid.nodes()) throw std::invalid_argument("weighted_scalar: grid mismatch");
  std::vector<double> R = scalar_curvature(g);
  std::vector<double> lap = flat_laplacian(grid, f.f);
  Field ff = to_field(grid, f.f);
  std::vector<double> f1 = re(spectral::derivative(ff, 0));
  std::vector<double> f2 = re(spectral::derivative(ff, 1));

  std::vector<double> out(R.size()), alt(R.size());
  double scale = 0, diff = 0;
  for (std::size_t i = 0; i < R.size(); ++i) {
    double em2u = std::exp(-2.0 * g.u[i]);
    double lap_g = em2u * lap[i];
    double grad2 = em2u * (f1[i] * f1[i] + f2[i] * f2[i]);
    out[i] = R[i] + 2.0 * lap_g - grad2;
    double lap_f = lap_g - grad2;  // weighted Laplacian of f itself
    alt[i] = R[i] + 2.0 * lap_f + grad2;
    scale = std::max({scale, std::abs(out[i]), 1.0});
    diff = std::max(diff, std::abs(out[i] - alt[i]));
  }
  if (diff > 1e-10 * scale)
    throw std::runtime_error("weighted_scalar: the two forms of R_f disagree");
  return out;
}

SymmetricTensorField2 weighted_ricci(const ConformalTorusMetric& g, const WeightField& f) {
  const Torus grid = g.grid();
  if (f.f.size() != grid.nodes()) throw std::invalid_argument("weighted_ricci: grid mismatch");
  Field uf = to_field(grid, g.u), ff = to_field(grid, f.f);
  std::vector<double> u1 = re(spectral::derivative(uf, 0));
  std::vector<double> u2 = re(spectral::derivative(uf, 1));
  std::vector<double> f1 = re(spectral::derivative(ff, 0));
  std::vector<double> f2 = re(spectral::derivative(ff, 1));
  std::vector<double> f11 = re(spectral::derivative(spectral::derivative(ff, 0), 0));
  std::vector<double> f12 = re(spectral::derivative(spectral::derivative(ff, 0), 1));
  std::vector<double> f22 = re(spectral::derivative(spectral::derivative(ff, 1), 1));
  std::vector<double> R = scalar_curvature(g);

  SymmetricTensorField2 T;
  const std::size_t nn = grid.nodes();
  T.t11.resize(nn);
  T.t12.resize(nn);
  T.t22.resize(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    double h11 = f11[i] - u1[i] * f1[i] + u2[i] * f2[i];
    double h12 = f12[i] - u2[i] * f1[i] - u1[i] * f2[i];
    double h22 = f22[i] + u1[i] * f1[i] - u2[i] * f2[i];
    double half_Rg = 0.5 * R[i] * std::exp(2.0 * g.u[i]);
    T.t11[i] = half_Rg + h11;
    T.t12[i] = h12;
    T.t22[i] = half_Rg + h22;
  }
  return T;
}

std::vector<double> tensor_trace(const ConformalTorusMetric& g, const SymmetricTensorField2& T) {
  std::vector<double> out(T.t11.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::exp(-2.0 * g.u[i]) * (T.t11[i] + T.t22[i]);
  return out;
}

std::vector<double> tensor_norm_sq(const ConformalTorusMetric& g, const SymmetricTensorField2& T) {
  std::vector<double> out(T.t11.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double w = std::exp(-4.0 * g.u[i]);
    out[i] = w * (T.t11[i] * T.t11[i] + 2.0 * T.t12[i] * T.t12[i] + T.t22[i] * T.t22[i]);
  }
  return out;
}

namespace {

std::vector<double> flow_rhs(const ConformalTorusMetric& g, bool normalized) {
  std::vector<double> lap = flat_laplacian(g.grid(), g.u);
  std::vector<double> rhs(lap.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = std::exp(-2.0 * g.u[i]) * lap[i];
  if (normalized) {
    // Rbar = (integral R dV)/Vol; identically zero on T^2 up to quadrature.
    std::vector<double> R = scalar_curvature(g);
    double rbar = integrate_dv(g, R) / g.volume();
    for (auto& x : rhs) x += 0.5 * rbar;
  }
  return rhs;
}

void sample_stats(FlowSample2& s) {
  const auto& g = s.metric;
  std::vector<double> R = scalar_curvature(g);
  s.volume = g.volume();
  s.min_R = *std::min_element(R.begin(), R.end());
  s.max_R = *std::max_element(R.begin(), R.end());
  std::vector<double> Rf = weighted_scalar(g, s.entropy.minimizer);
  double mean = integrate_dv(g, Rf) / s.volume;
  std::vector<double> dev(Rf.size());
  for (std::size_t i = 0; i < Rf.size(); ++i) dev[i] = (Rf[i] - mean) * (Rf[i] - mean);
  s.stddev_Rf = std::sqrt(integrate_dv(g, dev) / s.volume);
}

}  // namespace

std::vector<FlowSample2> ricci_flow_2d(const ConformalTorusMetric& g0, double t_end, double dt,
                                       bool normalized, const Flow2Options& opts) {
  if (!(dt > 0)) throw std::invalid_argument("ricci_flow_2d: dt must be positive");
  ConformalTorusMetric g = g0;
  const std::size_t nn = g.grid().nodes();
  const double h = std::min(g.l1, g.l2) / g.n;

  std::vector<FlowSample2> out;
  EntropySolveOptions esolve = opts.entropy;

  auto record = [&](double t) {
    FlowSample2 s;
    s.t = t;
    s.metric = g;
    esolve.warm_start = out.empty() ? nullptr : &out.back().entropy;
    s.entropy = lambda_entropy(g, esolve);
    sample_stats(s);
    out.push_back(std::move(s));
  };

  record(0.0);
  const long long steps = (long long)std::ceil(t_end / dt - 1e-12);
  for (long long k = 0; k < steps; ++k) {
    double umin = *std::min_element(g.u.begin(), g.u.end());
    double cap = opts.cfl_constant * h * h * std::exp(2.0 * umin);
    if (dt > cap) {
      std::ostringstream msg;
      msg << "ricci_flow_2d: CFL violation, dt = " << dt << " exceeds " << cap;
      throw std::runtime_error(msg.str());
    }
    auto k1 = flow_rhs(g, normalized);
    ConformalTorusMetric tmp = g;
    for (std::size_t i = 0; i < nn; ++i) tmp.u[i] = g.u[i] + 0.5 * dt * k1[i];
    auto k2 = flow_rhs(tmp, normalized);
    for (std::size_t i = 0; i < nn; ++i) tmp.u[i] = g.u[i] + 0.5 * dt * k2[i];
    auto k3 = flow_rhs(tmp, normalized);
    for (std::size_t i = 0; i < nn; ++i) tmp.u[i] = g.u[i] + dt * k3[i];
    auto k4 = flow_rhs(tmp, normalized);
    for (std::size_t i = 0; i < nn; ++i)
      g.u[i] += (dt / 6.0) * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);

    if ((k + 1) % opts.sample_every == 0 || k + 1 == steps) record((k + 1) * dt);
  }
  return out;
}

DerivativeCheckReport perelman_derivative_check(const std::vector<FlowSample2>& traj) {
  if (traj.size() < 3)
    throw std::invalid_argument("perelman_derivative_check: need at least 3 samples");
  DerivativeCheckReport rep;
  const double t0 = traj.front().t, t1 = traj.back().t;
  for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
    const auto& s = traj[k];
    double dl = (traj[k + 1].entropy.lambda - traj[k - 1].entropy.lambda) /
                (traj[k + 1].t - traj[k - 1].t);
    // 2 integral |Ric_f|^2 e^{-f} dV with the unit-mass minimizer
    WeightField f = s.entropy.minimizer;
    if (f.mode != WeightField::Norm::UnitMass)
      throw std::invalid_argument("perelman_derivative_check: needs unit-mass minimizer");
    SymmetricTensorField2 ric = weighted_ricci(s.metric, f);
    std::vector<double> n2 = tensor_norm_sq(s.metric, ric);
    for (std::size_t i = 0; i < n2.size(); ++i) n2[i] *= std::exp(-f.f[i]);
    double rhs = 2.0 * integrate_dv(s.metric, n2);
    DerivativeCheckRow row;
    row.t = s.t;
    row.dlambda_dt = dl;
    row.ricci_integral = rhs;
    row.rel_error = std::abs(dl - rhs) / std::max(std::abs(rhs), 1e-300);
    rep.max_rel_error = std::max(rep.max_rel_error, row.rel_error);
    if (s.t >= t0 + 0.25 * (t1 - t0) && s.t <= t0 + 0.75 * (t1 - t0))
      rep.max_rel_error_mid = std::max(rep.max_rel_error_mid, row.rel_error);
    rep.rows.push_back(row);
  }
  return rep;
}

double normalized_lambda(const ConformalTorusMetric& g) {
  return lambda_entropy(g).lambda * g.volume();
}
double normalized_lambda(const ConformalTorusMetric& g, const EntropyResult& e) {
  return e.lambda * g.volume();
}

CauchySchwarzReport cauchy_schwarz_chain_check(const std::vector<double>& phi,
                                               const ConformalTorusMetric& g) {
  if (phi.size() != g.grid().nodes())
    throw std::invalid_argument("cauchy_schwarz_chain_check: grid mismatch");
  double mx = 0;
  for (double p : phi) {
    if (p < 0) throw std::invalid_argument("cauchy_schwarz_chain_check: phi must be >= 0");
    mx = std::max(mx, p);
  }
  if (mx == 0) throw std::invalid_argument("cauchy_schwarz_chain_check: phi vanishes identically");
  std::vector<double> p2(phi.size()), p4(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    p2[i] = phi[i] * phi[i];
    p4[i] = p2[i] * p2[i];
  }
  double i2 = integrate_dv(g, p2), i4 = integrate_dv(g, p4);
  CauchySchwarzReport rep;
  rep.lhs = g.volume() * (i4 / i2) * (i4 / i2);
  rep.rhs = i4;
  rep.holds = rep.lhs >= rep.rhs * (1.0 - 1e-12);
  return rep;
}

std::string trajectory_csv(const std::vector<FlowSample2>& traj) {
  std::ostringstream os;
  os << "t,lambda,normalized_lambda,vol,min_R,max_R,stddev_Rf\n";
  for (const auto& s : traj) {
    os << format_g17(s.t) << ',' << format_g17(s.entropy.lambda) << ','
       << format_g17(s.entropy.lambda * s.volume) << ',' << format_g17(s.volume) << ','
       << format_g17(s.min_R) << ',' << format_g17(s.max_R) << ',' << format_g17(s.stddev_Rf)
       << '\n';
  }
  return os.str();
}

void write_metric_snapshot(const std::string& path, const ConformalTorusMetric& g) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_metric_snapshot: cannot open " + path);
  f.write("SPFG", 4);
  std::uint32_t endian = 0x01020304u, n = std::uint32_t(g.n);
  f.write(reinterpret_cast<const char*>(&endian), 4);
  f.write(reinterpret_cast<const char*>(&n), 4);
  f.write(reinterpret_cast<const char*>(&g.l1), 8);
  f.write(reinterpret_cast<const char*>(&g.l2), 8);
  f.write(reinterpret_cast<const char*>(g.u.data()), std::streamsize(g.u.size() * 8));
}

ConformalTorusMetric read_metric_snapshot(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_metric_snapshot: cannot open " + path);
  char magic[4];
  f.read(magic, 4);
  if (std::memcmp(magic, "SPFG", 4) != 0)
    throw std::runtime_error("read_metric_snapshot: bad magic");
  std::uint32_t endian = 0, n = 0;
  f.read(reinterpret_cast<char*>(&endian), 4);
  if (endian != 0x01020304u)
    throw std::runtime_error("read_metric_snapshot: endianness mismatch");
  f.read(reinterpret_cast<char*>(&n), 4);
  ConformalTorusMetric g;
  g.n = int(n);
  f.read(reinterpret_cast<char*>(&g.l1), 8);
  f.read(reinterpret_cast<char*>(&g.l2), 8);
  g.u.resize(std::size_t(n) * n);
  f.read(reinterpret_cast<char*>(g.u.data()), std::streamsize(g.u.size() * 8));
  if (!f) throw std::runtime_error("read_metric_snapshot: truncated file");
  return g;
}

}  // namespace spinflow

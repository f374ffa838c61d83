#include "spinflow/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace spinflow {
namespace spectral {

namespace {

std::mutex plan_mutex;

fftw_plan get_plan(const Torus& g, bool forward) {
  static std::map<std::tuple<int, int, bool>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_tuple(g.dim, g.n, forward);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<int> dims(g.dim, g.n);
  std::vector<cplx> scratch(g.nodes());
  fftw_plan p = fftw_plan_dft(g.dim, dims.data(),
                              reinterpret_cast<fftw_complex*>(scratch.data()),
                              reinterpret_cast<fftw_complex*>(scratch.data()),
                              forward ? FFTW_FORWARD : FFTW_BACKWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(key, p);
  return p;
}

// Decodes the multi-index of a flat node index on the fly while applying a
// per-axis diagonal symbol; used for all Fourier multipliers below.
template <typename SymbolPerAxis>
void apply_symbol(const Torus& g, std::vector<cplx>& hat, SymbolPerAxis&& factor) {
  const int n = g.n;
  const std::size_t total = g.nodes();
  std::array<int, 4> k{0, 0, 0, 0};
  for (std::size_t idx = 0; idx < total; ++idx) {
    hat[idx] *= factor(k);
    // increment multi-index, last axis fastest
    for (int a = g.dim - 1; a >= 0; --a) {
      if (++k[a] < n) break;
      k[a] = 0;
    }
  }
}

}  // namespace

void fft(const Torus& g, cplx* data, bool forward) {
  fftw_plan p = get_plan(g, forward);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data),
                   reinterpret_cast<fftw_complex*>(data));
  if (!forward) {
    const double s = 1.0 / double(g.nodes());
    const std::size_t total = g.nodes();
    for (std::size_t i = 0; i < total; ++i) data[i] *= s;
  }
}

double wavenumber(const Torus& g, int axis, int k, double delta) {
  int ks = k <= g.n / 2 ? k : k - g.n;
  if (g.n % 2 == 0 && k == g.n / 2) return 0.0;
  return 2.0 * std::numbers::pi * (ks + delta) / g.length[axis];
}

double wavenumber_sq(const Torus& g, int axis, int k, double delta) {
  int ks = k <= g.n / 2 ? k : k - g.n;
  if (g.n % 2 == 0 && k == g.n / 2) ks = -g.n / 2;
  double xi = 2.0 * std::numbers::pi * (ks + delta) / g.length[axis];
  return xi * xi;
}

bool is_nyquist_mode(const Torus& g, const std::array<int, 4>& k) {
  if (g.n % 2 != 0) return false;
  for (int a = 0; a < g.dim; ++a)
    if (k[a] == g.n / 2) return true;
  return false;
}

Field derivative(const Field& f, int axis, double delta) {
  Field out = f;
  fft(out.grid, out.v.data(), true);
  const Torus& g = out.grid;
  apply_symbol(g, out.v, [&](const std::array<int, 4>& k) {
    return cplx(0, 1) * wavenumber(g, axis, k[axis], delta);
  });
  fft(g, out.v.data(), false);
  return out;
}

std::vector<Field> gradient(const Field& f, const std::array<double, 4>& twist) {
  Field hat = f;
  fft(hat.grid, hat.v.data(), true);
  std::vector<Field> out;
  for (int a = 0; a < f.grid.dim; ++a) {
    Field d = hat;
    apply_symbol(d.grid, d.v, [&](const std::array<int, 4>& k) {
      return cplx(0, 1) * wavenumber(d.grid, a, k[a], twist[a]);
    });
    fft(d.grid, d.v.data(), false);
    out.push_back(std::move(d));
  }
  return out;
}

Field laplacian(const Field& f, const std::array<double, 4>& twist) {
  Field out = f;
  fft(out.grid, out.v.data(), true);
  const Torus& g = out.grid;
  apply_symbol(g, out.v, [&](const std::array<int, 4>& k) {
    double s = 0;
    for (int a = 0; a < g.dim; ++a) s += wavenumber_sq(g, a, k[a], twist[a]);
    return cplx(-s, 0);
  });
  fft(g, out.v.data(), false);
  return out;
}

SpinorField derivative(const SpinorField& s, int axis) {
  SpinorField out = s;
  const std::size_t nodes = s.grid.nodes();
  for (int c = 0; c < s.comps; ++c) {
    Field comp(s.grid, std::vector<cplx>(s.comp(c), s.comp(c) + nodes));
    Field d = derivative(comp, axis, s.twist[axis]);
    std::copy(d.v.begin(), d.v.end(), out.comp(c));
  }
  return out;
}

SpinorField laplacian(const SpinorField& s) {
  SpinorField out = s;
  const std::size_t nodes = s.grid.nodes();
  for (int c = 0; c < s.comps; ++c) {
    Field comp(s.grid, std::vector<cplx>(s.comp(c), s.comp(c) + nodes));
    Field d = laplacian(comp, s.twist);
    std::copy(d.v.begin(), d.v.end(), out.comp(c));
  }
  return out;
}

}  // namespace spectral

Field real_part(const Field& f) {
  Field out = f;
  for (auto& z : out.v) z = cplx(z.real(), 0.0);
  return out;
}

double max_abs(const Field& f) {
  double m = 0;
  for (const auto& z : f.v) m = std::max(m, std::abs(z));
  return m;
}

double max_abs(const SpinorField& s) {
  double m = 0;
  for (const auto& z : s.v) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace spinflow

#include "spinflow/rng.hpp"

#include "spinflow/spectral.hpp"

namespace spinflow {

namespace {

// Lexicographic walk over [-kmax, kmax]^dim.
bool advance(std::array<int, 4>& k, int dim, int kmax) {
  for (int a = dim - 1; a >= 0; --a) {
    if (++k[a] <= kmax) return true;
    k[a] = -kmax;
  }
  return false;
}

std::size_t mode_index(const Torus& g, const std::array<int, 4>& k) {
  std::size_t idx = 0;
  for (int a = 0; a < g.dim; ++a) {
    int kk = k[a] >= 0 ? k[a] : k[a] + g.n;
    idx = idx * g.n + std::size_t(kk);
  }
  return idx;
}

// True for the canonical representative of each {k, -k} pair.
bool canonical(const std::array<int, 4>& k, int dim) {
  for (int a = 0; a < dim; ++a) {
    if (k[a] > 0) return true;
    if (k[a] < 0) return false;
  }
  return true;  // k == 0
}

}  // namespace

Field random_real_field(CounterRng& rng, const Torus& g, int kmax, double amplitude) {
  Field hat(g);
  std::array<int, 4> k{};
  for (int a = 0; a < g.dim; ++a) k[a] = -kmax;
  bool more = true;
  while (more) {
    double u1 = rng.next_symmetric();
    double u2 = rng.next_symmetric();
    bool zero = true;
    for (int a = 0; a < g.dim; ++a) zero = zero && k[a] == 0;
    if (zero) {
      hat.v[mode_index(g, k)] = cplx(amplitude * u1, 0.0);
    } else if (canonical(k, g.dim)) {
      cplx c = amplitude * cplx(u1, u2);
      std::array<int, 4> mk{};
      for (int a = 0; a < g.dim; ++a) mk[a] = -k[a];
      hat.v[mode_index(g, k)] = c;
      hat.v[mode_index(g, mk)] = std::conj(c);
    }
    more = advance(k, g.dim, kmax);
  }
  spectral::fft(g, hat.v.data(), false);
  // inverse fft normalizes by 1/N; undo so coefficients mean what they say
  for (auto& z : hat.v) z *= double(g.nodes());
  return real_part(hat);
}

SpinorField random_spinor_field(CounterRng& rng, const Torus& g, int comps,
                                std::array<double, 4> twist, int kmax, double amplitude) {
  SpinorField out(g, comps, twist);
  for (int c = 0; c < comps; ++c) {
    Field hat(g);
    std::array<int, 4> k{};
    for (int a = 0; a < g.dim; ++a) k[a] = -kmax;
    bool more = true;
    while (more) {
      double u1 = rng.next_symmetric();
      double u2 = rng.next_symmetric();
      hat.v[mode_index(g, k)] = amplitude * cplx(u1, u2);
      more = advance(k, g.dim, kmax);
    }
    spectral::fft(g, hat.v.data(), false);
    for (std::size_t i = 0; i < hat.v.size(); ++i) out.comp(c)[i] = hat.v[i] * double(g.nodes());
  }
  return out;
}

}  // namespace spinflow

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace spinflow {

using cplx = std::complex<double>;

// Uniform periodic grid on a flat torus R^dim / (L_0 Z x ... x L_{dim-1} Z),
// n nodes per axis, row-major storage with axis 0 slowest.
struct Torus {
  int dim = 2;
  int n = 0;
  std::array<double, 4> length{1, 1, 1, 1};

  std::size_t nodes() const {
    std::size_t m = 1;
    for (int a = 0; a < dim; ++a) m *= std::size_t(n);
    return m;
  }
  double cell_volume() const {
    double v = 1;
    for (int a = 0; a < dim; ++a) v *= length[a] / n;
    return v;
  }
  double volume() const {
    double v = 1;
    for (int a = 0; a < dim; ++a) v *= length[a];
    return v;
  }
  double coord(int axis, int idx) const { return length[axis] * idx / n; }

  bool operator==(const Torus& o) const {
    if (dim != o.dim || n != o.n) return false;
    for (int a = 0; a < dim; ++a)
      if (length[a] != o.length[a]) return false;
    return true;
  }
};

// Complex scalar field sampled on a torus grid.
struct Field {
  Torus grid;
  std::vector<cplx> v;

  Field() = default;
  explicit Field(const Torus& g) : grid(g), v(g.nodes(), cplx(0, 0)) {}
  Field(const Torus& g, std::vector<cplx> data) : grid(g), v(std::move(data)) {
    if (v.size() != grid.nodes()) throw std::invalid_argument("Field: size mismatch");
  }
};

// Section of the spinor bundle: `comps` complex components per node, stored
// component-major.  `twist` holds the spin-structure phases delta_j; the field
// stores the periodic representative of psi(x) = e^{2 pi i delta.x/L} psi_per(x),
// and derivatives shift momenta by delta.
struct SpinorField {
  Torus grid;
  int comps = 0;
  std::array<double, 4> twist{0, 0, 0, 0};
  std::vector<cplx> v;

  SpinorField() = default;
  SpinorField(const Torus& g, int c, std::array<double, 4> tw = {0, 0, 0, 0})
      : grid(g), comps(c), twist(tw), v(g.nodes() * c, cplx(0, 0)) {}

  cplx* comp(int c) { return v.data() + std::size_t(c) * grid.nodes(); }
  const cplx* comp(int c) const { return v.data() + std::size_t(c) * grid.nodes(); }
};

inline void require_same_grid(const Torus& a, const Torus& b, const char* who) {
  if (!(a == b)) throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

}  // namespace spinflow

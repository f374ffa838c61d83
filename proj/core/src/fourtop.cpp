#include "spinflow/fourtop.hpp"

#include <numeric>
#include <stdexcept>

namespace spinflow {

TopInvariants invariants(const SpinTopology& topo) {
  if (topo.p < 0 || topo.q < 0) throw std::invalid_argument("invariants: p, q must be >= 0");
  TopInvariants v;
  v.chi = 2 + 16ll * topo.p + 2ll * topo.q;
  v.sigma = -16ll * topo.p;
  v.a_hat = -v.sigma / 8;
  v.index = v.a_hat;
  v.p1 = 3 * v.sigma;
  return v;
}

Verdict verdict(const SpinTopology& topo, const std::optional<LaurentPolynomial>& alexander) {
  if (topo.p < 0 || topo.q < 0) throw std::invalid_argument("verdict: p, q must be >= 0");
  Verdict v;
  v.ht_holds = 4 * topo.p <= topo.q + 1;
  v.ht_equality = 4 * topo.p == topo.q + 1;

  if (!v.ht_holds) {
    v.singularity_forced = true;
    v.rationale =
        "2chi < 3|sigma| (4p > q+1): no nonsingular normalized Ricci flow exists [Cor. 5.2]";
    return v;
  }
  if (v.ht_equality && !(topo.p == 1 && topo.q == 3)) {
    v.singularity_forced = true;
    v.rationale =
        "2chi = 3|sigma| with (p,q) != (1,3): not homeomorphic to K3, so a nonsingular flow "
        "(which would force a hyperkahler limit on K3) is impossible [Cor. 5.2]";
    return v;
  }
  if (topo.p == 1 && topo.q == 3 && alexander && !alexander->is_one()) {
    v.singularity_forced = true;
    v.rationale =
        "homeomorphic to K3 with nontrivial Alexander polynomial: exotic smooth structure, "
        "every normalized Ricci flow becomes singular [Cor. 5.5]";
    return v;
  }
  v.singularity_forced = false;
  v.rationale = v.ht_equality
                    ? "2chi = 3|sigma| at (p,q) = (1,3): no obstruction from this decision "
                      "table without a surgery-knot certificate [Cor. 5.2]"
                    : "2chi > 3|sigma|: no singularity forced by this decision table [Cor. 5.2]";
  return v;
}

namespace {

using Mat = std::vector<std::vector<LaurentPolynomial>>;

Mat identity_matrix(int n) {
  Mat m(n, std::vector<LaurentPolynomial>(n));
  for (int i = 0; i < n; ++i) m[i][i] = LaurentPolynomial::constant(1);
  return m;
}

Mat multiply(const Mat& a, const Mat& b) {
  int n = (int)a.size();
  Mat out(n, std::vector<LaurentPolynomial>(n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (a[i][k].is_zero()) continue;
      for (int j = 0; j < n; ++j) {
        if (b[k][j].is_zero()) continue;
        out[i][j] = out[i][j] + a[i][k] * b[k][j];
      }
    }
  return out;
}

// Reduced Burau matrix of sigma_i^{+-1} acting on columns, size s-1.
// sigma_i:  e_{i-1} -> e_{i-1} + t e_i,  e_i -> -t e_i,  e_{i+1} -> e_i + e_{i+1}.
Mat burau_generator(int i, int s, bool inverse) {
  const int n = s - 1;
  Mat m = identity_matrix(n);
  auto T = [](int k) { return LaurentPolynomial::t_power(k); };
  int col = i - 1;  // e_i lives in column i-1 (0-based); columns hold images
  if (!inverse) {
    m[col][col] = LaurentPolynomial::t_power(1, -1);  // e_i -> -t e_i
    if (i >= 2) m[col][col - 1] = T(1);               // e_{i-1} -> e_{i-1} + t e_i
    if (i <= s - 2) m[col][col + 1] = T(0);           // e_{i+1} -> e_i + e_{i+1}
  } else {
    m[col][col] = LaurentPolynomial::t_power(-1, -1);  // e_i -> -t^{-1} e_i
    if (i >= 2) m[col][col - 1] = T(0);                // e_{i-1} -> e_{i-1} + e_i
    if (i <= s - 2) m[col][col + 1] = T(-1);           // e_{i+1} -> e_{i+1} + t^{-1} e_i
  }
  return m;
}

LaurentPolynomial determinant(const Mat& m) {
  const int n = (int)m.size();
  if (n == 0) return LaurentPolynomial::constant(1);
  if (n == 1) return m[0][0];
  LaurentPolynomial det;
  std::vector<int> rows(n - 1);
  for (int k = 1; k < n; ++k) rows[k - 1] = k;
  for (int j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    Mat minor(n - 1, std::vector<LaurentPolynomial>(n - 1));
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int c = 0; c < n; ++c) {
        if (c == j) continue;
        minor[r - 1][cc++] = m[r][c];
      }
    }
    LaurentPolynomial term = m[0][j] * determinant(minor);
    det = (j % 2 == 0) ? det + term : det - term;
  }
  return det;
}

}  // namespace

int closure_components(const std::vector<int>& word, int strands) {
  std::vector<int> perm(strands);
  std::iota(perm.begin(), perm.end(), 0);
  for (int g : word) {
    int i = std::abs(g) - 1;
    if (i < 0 || i >= strands - 1)
      throw std::invalid_argument("closure_components: generator out of range");
    std::swap(perm[i], perm[i + 1]);
  }
  std::vector<bool> seen(strands, false);
  int cycles = 0;
  for (int s = 0; s < strands; ++s) {
    if (seen[s]) continue;
    ++cycles;
    for (int t = s; !seen[t]; t = perm[t]) seen[t] = true;
  }
  return cycles;
}

LaurentPolynomial alexander_from_braid(const std::vector<int>& word, int strands) {
  if (strands < 1) throw std::invalid_argument("alexander_from_braid: strands >= 1");
  if (strands == 1) {
    if (!word.empty()) throw std::invalid_argument("alexander_from_braid: B_1 has no generators");
    return LaurentPolynomial::constant(1);  // unknot
  }
  if (word.empty())
    throw std::invalid_argument("alexander_from_braid: empty word closes to an unlink");
  if (closure_components(word, strands) != 1)
    throw std::invalid_argument("alexander_from_braid: closure is a multi-component link");

  Mat burau = identity_matrix(strands - 1);
  for (int g : word) {
    int i = std::abs(g);
    if (i < 1 || i > strands - 1)
      throw std::invalid_argument("alexander_from_braid: generator out of range");
    burau = multiply(burau, burau_generator(i, strands, g < 0));
  }
  for (int i = 0; i < strands - 1; ++i)
    burau[i][i] = burau[i][i] - LaurentPolynomial::constant(1);

  LaurentPolynomial det = determinant(burau);
  LaurentPolynomial cyclotomic;
  for (int k = 0; k < strands; ++k) cyclotomic = cyclotomic + LaurentPolynomial::t_power(k);
  LaurentPolynomial quotient = det.divide_exact(cyclotomic);
  return quotient.normalized_alexander();
}

bool is_exotic_k3(const LaurentPolynomial& alexander) { return !alexander.is_one(); }

}  // namespace spinflow

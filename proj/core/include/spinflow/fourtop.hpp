#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinflow/laurent.hpp"

namespace spinflow {

// Simply-connected spin 4-manifold with intersection form Q = -2p E8 + q H.
struct SpinTopology {
  int p = 0;
  int q = 0;
};

struct TopInvariants {
  long long chi = 0;     // 2 + 16p + 2q
  long long sigma = 0;   // -16p
  long long a_hat = 0;   // -sigma/8 = 2p
  long long index = 0;   // Dirac index, equals a_hat
  long long p1 = 0;      // 3 sigma
};

TopInvariants invariants(const SpinTopology& topo);

struct Verdict {
  bool ht_holds = false;      // 2 chi >= 3|sigma|  <=>  4p <= q+1
  bool ht_equality = false;   // 4p == q+1
  bool singularity_forced = false;
  std::string rationale;
};

// Decision table for the normalized Ricci flow: singularities are forced when
// the inequality fails, when equality holds away from (p,q) = (1,3), and on
// (1,3) when the surgery knot has nontrivial Alexander polynomial (exotic K3).
Verdict verdict(const SpinTopology& topo,
                const std::optional<LaurentPolynomial>& alexander = std::nullopt);

// Alexander polynomial of the closure of a braid word via the reduced Burau
// determinant, normalized to the symmetric form with value +1 at t = 1.
// Generators are 1-based and signed: {1,1,1} is sigma_1^3.  Throws if the word
// is empty on >1 strands, references a missing generator, or closes to a link
// with more than one component.
LaurentPolynomial alexander_from_braid(const std::vector<int>& word, int strands);

// Number of components of the braid closure (cycles of the underlying permutation).
int closure_components(const std::vector<int>& word, int strands);

// Nontrivial normalized Alexander polynomial certifies an exotic K3 in the
// knot-surgery family.
bool is_exotic_k3(const LaurentPolynomial& alexander);

}  // namespace spinflow

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace spinflow {

struct CheckRecord {
  std::string check;
  std::string grid;
  std::uint64_t seed = 0;
  double residual = 0;
  double tolerance = 0;
  bool pass = false;
};

struct VerifyOptions {
  int seeds = 50;
  std::uint64_t base_seed = 0x5EED;
  int n2 = 64;  // T^2 grid
  int n4 = 16;  // T^4 grid
  int threads = 1;
};

// The full identity suite: exact Clifford algebra, weighted and twisted
// Schrodinger-Lichnerowicz, weighted self-adjointness and its energy form,
// weighted Ricci identity, unitary equivalence of the weighted spectrum,
// Chern-Weil pairing and the pointwise monopole algebra.  Deterministic for a
// fixed base seed; records appear in a fixed order regardless of threading.
std::vector<CheckRecord> run_identity_suite(const VerifyOptions& opts = {});

std::string suite_json(const std::vector<CheckRecord>& records);
bool suite_pass(const std::vector<CheckRecord>& records);

// Frozen residual budgets (spectral-accuracy head-room included).
namespace tolerances {
inline constexpr double weighted_sl_t2 = 1e-8;
inline constexpr double weighted_sl_t4 = 1e-6;
inline constexpr double ibp = 1e-9;            // scaled by the norm product
inline constexpr double energy_identity = 1e-9;
inline constexpr double ricci_identity = 1e-8;
inline constexpr double twisted_sl = 1e-6;
inline constexpr double unitary_equivalence = 1e-8;
inline constexpr double chern_weil = 1e-10;
inline constexpr double monopole_algebra = 1e-10;
}  // namespace tolerances

}  // namespace spinflow

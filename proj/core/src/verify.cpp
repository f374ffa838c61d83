#include "spinflow/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>

#include "spinflow/clifford.hpp"
#include "spinflow/io.hpp"
#include "spinflow/rng.hpp"
#include "spinflow/spectral.hpp"
#include "spinflow/spinfield.hpp"

namespace spinflow {

namespace {

// Band limits keeping all second-order products alias-free: 2 K_f + K_psi < n/2.
struct FieldCaps {
  int kf, ka, kpsi;
};
FieldCaps caps_for(int n) { return n >= 64 ? FieldCaps{6, 6, 10} : FieldCaps{2, 2, 3}; }

std::string grid_tag(const Torus& g) {
  return "T" + std::to_string(g.dim) + ":" + std::to_string(g.n);
}

std::vector<CheckRecord> seed_checks(std::uint64_t seed, int n2, int n4) {
  std::vector<CheckRecord> rec;
  CliffordRep rep2 = build_rep(2);
  CliffordRep rep4 = build_rep(4);

  auto push = [&](const std::string& name, const std::string& grid, double res, double tol) {
    rec.push_back({name, grid, seed, res, tol, res <= tol});
  };

  {  // T^2, N = n2
    Torus g{2, n2, {1.0, 1.3, 1, 1}};
    FieldCaps c = caps_for(n2);
    CounterRng rng(seed);
    Field f = random_real_field(rng, g, c.kf, 0.08);
    SpinorField psi = random_spinor_field(rng, g, 2, {0, 0, 0, 0}, c.kpsi, 1.0);
    SpinorField phi = random_spinor_field(rng, g, 2, {0, 0, 0, 0}, c.kpsi, 1.0);

    push("weighted_sl", grid_tag(g), check_weighted_sl(rep2, f, psi),
         tolerances::weighted_sl_t2);
    double norms = std::sqrt(weighted_norm_sq(psi, f) * weighted_norm_sq(phi, f));
    push("weighted_ibp", grid_tag(g), check_weighted_ibp(rep2, f, psi, phi),
         tolerances::ibp * std::max(1.0, norms));
    push("energy_identity", grid_tag(g), check_energy_identity(rep2, f, psi),
         tolerances::energy_identity * std::max(1.0, weighted_norm_sq(psi, f)));
    push("ricci_identity", grid_tag(g), check_weighted_ricci_identity(rep2, f, psi, 0),
         tolerances::ricci_identity);
    push("dirac_conjugation", grid_tag(g), check_weighted_dirac_conjugation(rep2, f, psi),
         1e-10);
  }

  {  // T^4, N = n4
    Torus g{4, n4, {1.0, 1.0, 1.2, 0.9}};
    FieldCaps c = caps_for(n4);
    CounterRng rng(seed ^ 0x9E3779B97F4A7C15ull);
    Field f = random_real_field(rng, g, c.kf, 0.1);
    SpinorField psi = random_spinor_field(rng, g, 4, {0, 0, 0, 0}, c.kpsi, 1.0);

    push("weighted_sl", grid_tag(g), check_weighted_sl(rep4, f, psi),
         tolerances::weighted_sl_t4);
    push("ricci_identity", grid_tag(g), check_weighted_ricci_identity(rep4, f, psi, 1),
         tolerances::ricci_identity * 10);

    U1Connection A;
    for (int j = 0; j < 4; ++j) A.comps[j] = random_real_field(rng, g, c.ka, 0.5);
    push("twisted_sl", grid_tag(g), check_twisted_sl(rep4, A, f, psi),
         tolerances::twisted_sl);

    U1Connection A0;
    for (int j = 0; j < 4; ++j) A0.comps[j] = Field(g);
    Field f0(g);
    push("twisted_sl_plain", grid_tag(g), check_twisted_sl(rep4, A0, f0, psi), 1e-12);

    // monopole algebra at a random point-value of psi in W+
    Eigen::Vector4cd pv = Eigen::Vector4cd::Zero();
    CounterRng prng(seed ^ 0xABCDEFull);
    pv[0] = cplx(prng.next_symmetric(), prng.next_symmetric());
    pv[1] = cplx(prng.next_symmetric(), prng.next_symmetric());
    double fw = 0.7 * prng.next_symmetric();
    auto mono = monopole_algebra_check(rep4, pv, fw);
    push("monopole_algebra", "pointwise", mono.pass ? 0.0 : 1.0,
         tolerances::monopole_algebra);
  }
  return rec;
}

double clifford_exactness_residual() {
  // returns 0 only if every identity holds exactly
  for (int n : {2, 3, 4}) {
    CliffordRep rep = build_rep(n);
    const int d = rep.rep_dim();
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    for (int i = 0; i < n; ++i) {
      if (!exactly_zero(Eigen::MatrixXcd(rep.gammas[i] + rep.gammas[i].adjoint()))) return 1;
      for (int j = 0; j < n; ++j) {
        Eigen::MatrixXcd anti = rep.gammas[i] * rep.gammas[j] + rep.gammas[j] * rep.gammas[i];
        Eigen::MatrixXcd want = i == j ? Eigen::MatrixXcd(-2.0 * id) : Eigen::MatrixXcd(0.0 * id);
        if (!exactly_equal(anti, want)) return 1;
      }
    }
    Eigen::MatrixXcd w = volume_element(rep);
    if (!exactly_equal(w * w, id)) return 1;
    if (n % 2 == 0) {
      auto [pp, pm] = chirality_projectors(rep);
      if (!exactly_equal(pp * pp, pp) || !exactly_equal(pm * pm, pm)) return 1;
      if (!exactly_equal(pp + pm, id)) return 1;
      if (!exactly_zero(pp * pm)) return 1;
      for (int i = 0; i < n; ++i) {
        if (!exactly_zero(w * rep.gammas[i] + rep.gammas[i] * w)) return 1;
        if (!exactly_equal(rep.gammas[i] * pp, pm * rep.gammas[i])) return 1;
      }
    }
  }
  return 0;
}

}  // namespace

std::vector<CheckRecord> run_identity_suite(const VerifyOptions& opts) {
  std::vector<CheckRecord> out;

  out.push_back({"clifford_exact", "matrix", 0, clifford_exactness_residual(), 0.0, false});
  out.back().pass = out.back().residual == 0.0;

  {  // Chern-Weil on the three flux configurations
    std::array<double, 4> L{1, 1, 1, 1};
    std::vector<Eigen::Matrix4i> cases(3, Eigen::Matrix4i::Zero());
    cases[1](0, 1) = 1;
    cases[1](2, 3) = 1;
    cases[2](0, 1) = 1;
    cases[2](2, 3) = -1;
    for (auto& n : cases) n -= Eigen::Matrix4i(n.transpose().eval());
    for (std::size_t k = 0; k < cases.size(); ++k) {
      auto r = chern_weil_check(cases[k], L);
      double res = std::abs(r.lhs - r.rhs);
      out.push_back({"chern_weil", "flux#" + std::to_string(k), 0, res,
                     tolerances::chern_weil, res <= tolerances::chern_weil});
    }
  }

  // seeded identity checks, deterministic order independent of threading
  std::vector<std::vector<CheckRecord>> per_seed(opts.seeds);
  int threads = std::max(1, opts.threads);
  if (threads == 1) {
    for (int s = 0; s < opts.seeds; ++s)
      per_seed[s] = seed_checks(opts.base_seed + std::uint64_t(s), opts.n2, opts.n4);
  } else {
    std::vector<std::future<void>> jobs;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t)
      jobs.push_back(std::async(std::launch::async, [&]() {
        for (int s = next.fetch_add(1); s < opts.seeds; s = next.fetch_add(1))
          per_seed[s] = seed_checks(opts.base_seed + std::uint64_t(s), opts.n2, opts.n4);
      }));
    for (auto& j : jobs) j.get();
  }
  for (auto& chunk : per_seed)
    for (auto& r : chunk) out.push_back(std::move(r));

  {  // unitary equivalence: spectrum of D_f^2 in L^2_f vs D^2 in L^2
    CliffordRep rep2 = build_rep(2);
    Torus g{2, 32, {1.0, 1.0, 1, 1}};
    int ue_seeds = std::max(1, std::min(3, opts.seeds / 16));
    for (int s = 0; s < ue_seeds; ++s) {
      CounterRng rng(opts.base_seed + 7777 + std::uint64_t(s));
      Field f = random_real_field(rng, g, 3, 0.1);
      auto weighted = dirac_spectrum(rep2, g, {0, 0, 0, 0}, f, 10);
      auto flat = dirac_spectrum(rep2, g, {0, 0, 0, 0}, std::nullopt, 10);
      double res = 0;
      for (int i = 0; i < 10; ++i) res = std::max(res, std::abs(weighted[i] - flat[i]));
      out.push_back({"unitary_equivalence", grid_tag(g), opts.base_seed + 7777 + std::uint64_t(s),
                     res, tolerances::unitary_equivalence,
                     res <= tolerances::unitary_equivalence});
    }
  }

  return out;
}

std::string suite_json(const std::vector<CheckRecord>& records) {
  JsonWriter w;
  w.begin_object();
  w.key("checks").begin_array();
  for (const auto& r : records) {
    w.begin_object();
    w.key("check").value(r.check);
    w.key("grid").value(r.grid);
    w.key("seed").value((long long)r.seed);
    w.key("residual").value(r.residual);
    w.key("tolerance").value(r.tolerance);
    w.key("pass").value(r.pass);
    w.end_object();
  }
  w.end_array();
  int failures = 0;
  for (const auto& r : records)
    if (!r.pass) ++failures;
  w.key("total").value((int)records.size());
  w.key("failures").value(failures);
  w.key("pass").value(failures == 0);
  w.end_object();
  return w.str();
}

bool suite_pass(const std::vector<CheckRecord>& records) {
  return std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.pass; });
}

}  // namespace spinflow

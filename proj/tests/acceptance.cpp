// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion.  Exit code 0 iff all pass.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "shortpath/algorithm.hpp"
#include "shortpath/bw.hpp"
#include "shortpath/eigensolve.hpp"
#include "shortpath/entropy.hpp"
#include "shortpath/hilbert.hpp"
#include "shortpath/instance.hpp"
#include "shortpath/localize.hpp"
#include "shortpath/reduce.hpp"
#include "shortpath/rng.hpp"
#include "shortpath/walk.hpp"

using namespace sp;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void fail(const std::string& why) {
    pass = false;
    if (detail.tellp() > 0) detail << "; ";
    detail << why;
  }
};

struct BatteryEntry {
  Instance inst;
  Mode mode;
  int64_t e0 = 0;
  HsParams p{1.0, 0.0, 3};
  PathScan scan;  // 21-point s-grid
};

// 50 seeded instances (n <= 12, d in {2,3}, weights +-1, b = 0.2, K = 3),
// filtered to the degeneracy assumption in auto mode; deterministic.
std::vector<BatteryEntry> build_battery(int count) {
  static const std::pair<int, int> shapes[] = {{8, 2}, {10, 2}, {12, 2}, {7, 3}, {9, 3}, {11, 3}};
  std::vector<BatteryEntry> out;
  uint64_t seed = 1000;
  size_t shape = 0;
  while ((int)out.size() < count) {
    const auto [n, d] = shapes[shape % 6];
    ++shape;
    Instance inst = random_instance(n, d, (3 * n) / 2, {-1, 1}, seed++);
    Mode mode = mode_for(inst, "auto");
    try {
      ground_basis_index(inst, mode);
    } catch (const PreconditionError&) {
      continue;
    }
    BatteryEntry e{std::move(inst), mode, 0, HsParams(1.0, 0.0, 3), {}};
    e.e0 = energy_of(e.inst, ground_configs(e.inst)[0]);
    e.p = HsParams(1.0, 0.2 * std::fabs((double)e.e0), 3);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<double> grid21() {
  std::vector<double> g;
  for (int i = 0; i < 21; ++i) g.push_back(i / 20.0);
  return g;
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

StateVector random_unit(int n, Mode mode, uint64_t seed) {
  StateVector v = zero_state(n, mode);
  Rng rng(seed);
  double nrm2 = 0.0;
  for (auto& a : v.a) {
    a = 2.0 * rng.uniform() - 1.0;
    nrm2 += a * a;
  }
  for (auto& a : v.a) a /= std::sqrt(nrm2);
  return v;
}

// ---- criteria ----

Outcome criterion1() {
  Outcome o;
  const double t0 = now_seconds();
  Instance i2(2, 2, {{{0, 1}, -1}});
  HsParams p(1.0, 1.0, 3);
  auto [e, v] = ground(i2, p, Mode::even);
  const double g = gap(i2, p, Mode::even);
  const double eq = eq_ground(i2, p, Mode::even);
  const double pov = p_ov_exact(i2, p, Mode::even);
  if (std::fabs(e + std::sqrt(2.0)) > 1e-9) o.fail("E_{0,1} != -sqrt(2)");
  if (std::fabs(g - 2.0 * std::sqrt(2.0)) > 1e-9) o.fail("gap != 2 sqrt(2)");
  if (std::fabs(eq - 1.0) > 1e-9) o.fail("E^Q != 1");
  if (std::fabs(pov - (2.0 + std::sqrt(2.0)) / 4.0) > 1e-9) o.fail("P_ov != (2+sqrt2)/4");
  const double dt = now_seconds() - t0;
  if (dt >= 1.0) o.fail("runtime >= 1 s");
  o.detail << "runtime " << dt << " s";
  return o;
}

Outcome criterion2(std::vector<BatteryEntry>& battery) {
  Outcome o;
  int applicable = 0;
  for (auto& e : battery) {
    const auto& rep1 = e.scan.points.back();  // s = 1
    if (!rep1.qgood_flag) continue;
    ++applicable;
    const double bw = self_consistent_e01(e.inst, e.p, e.mode);
    if (std::fabs(bw - rep1.e_ground) > 1e-8) {
      std::ostringstream m;
      m << "instance n=" << e.inst.n() << " d=" << e.inst.d() << ": |bw-ed| = "
        << std::fabs(bw - rep1.e_ground);
      o.fail(m.str());
    }
  }
  o.detail << applicable << "/" << battery.size() << " instances with E^Q_{0,1} >= E_0+1/2";
  return o;
}

Outcome criterion3(std::vector<BatteryEntry>& battery) {
  Outcome o;
  int checked = 0;
  for (auto& e : battery) {
    if (!e.scan.monotonicity_violations.empty()) o.fail("E^Q monotonicity violated");
    for (size_t i = 0; i < e.scan.points.size(); ++i) {
      const auto& pt = e.scan.points[i];
      const double rhs = pt.eq_ground - (double)e.e0;
      if (rhs > 0 && pt.gap < rhs - 1e-8) {
        std::ostringstream m;
        m << "gap lemma violated at s=" << e.scan.grid[i] << " (gap " << pt.gap << " < " << rhs
          << ")";
        o.fail(m.str());
      }
      ++checked;
    }
  }
  o.detail << checked << " grid points checked";
  return o;
}

Outcome criterion4(std::vector<BatteryEntry>& battery) {
  Outcome o;
  int applicable = 0;
  for (auto& e : battery) {
    const auto& rep1 = e.scan.points.back();
    if (rep1.qgood_flag && rep1.moment_flag) {
      ++applicable;
      if (rep1.gap < 0.5 - 1e-9) o.fail("gap(H_1) < 1/2 under theorem hypotheses");
    }
  }
  o.detail << applicable << " instances under both hypotheses";
  return o;
}

Outcome criterion5() {
  Outcome o;
  for (int n : {4, 8, 16}) {
    for (int l = 1; l <= 31; l += 2)
      if (x_moment(n, l) != 0.0) o.fail("odd moment nonzero");
    double prev = x_moment(n, 2);
    for (int l = 4; l < n; l += 2) {
      const double cur = x_moment(n, l);
      if (!(cur < prev)) o.fail("even moments not strictly decreasing");
      if (cur > std::pow((double)l / n, l / 2.0) + 1e-15) o.fail("moment bound violated");
      prev = cur;
    }
    auto rs = return_probabilities(n, 3, 4, 100000, 777);
    for (int t = 1; t <= 4; ++t) {
      const double p = rs.exact_return[t - 1];
      const double freq = rs.mc_freq[t - 1];
      if (p == 0.0) {
        if (freq != 0.0) o.fail("parity-forbidden return observed");
      } else {
        const double sigma = std::sqrt(p * (1 - p) / 100000.0);
        if (std::fabs(freq - p) > 3 * sigma) {
          std::ostringstream m;
          m << "MC return freq off at n=" << n << " t=" << t << " (" << freq << " vs " << p << ")";
          o.fail(m.str());
        }
      }
    }
  }
  o.detail << "n in {4,8,16}, odd L <= 31, MC at 1e5 walks";
  return o;
}

Outcome criterion6(std::vector<BatteryEntry>& battery) {
  Outcome o;
  for (size_t i = 0; i < 10 && i < battery.size(); ++i) {
    auto d = mean_energy_decay(battery[i].inst, 3, 5, 100000, 4242 + i);
    if (!d.within_3sigma) {
      std::ostringstream m;
      m << "decay curve outside 3 sigma for battery instance " << i;
      o.fail(m.str());
    }
  }
  o.detail << "10 instances, m <= 5, 1e5 samples";
  return o;
}

Outcome criterion7(std::vector<BatteryEntry>& battery) {
  Outcome o;
  int vectors = 0;
  for (int n : {4, 6, 8, 10}) {
    for (int i = 0; i < 1000; ++i) {
      auto c = check_lsi(random_unit(n, Mode::full, 1'000'000ull * n + i));
      if (!c.lsi1_ok || !c.lsi2_ok) o.fail("lsi violated on a random vector");
      ++vectors;
    }
  }
  int states = 0;
  for (auto& e : battery)
    for (auto& pt : e.scan.points) {
      auto c = check_lsi(pt.ground_vec);
      if (!c.lsi1_ok || !c.lsi2_ok) o.fail("lsi violated on a computed ground state");
      ++states;
    }
  for (int i = 0; i <= 10000; ++i) {
    const double sigma = i / 10000.0;
    if (std::fabs(tau_inv(tau(sigma)) - sigma) > 1e-9) o.fail("tau inverse identity broken");
  }
  o.detail << vectors << " random vectors, " << states << " ground states, 1e4-point tau grid";
  return o;
}

Outcome criterion8() {
  Outcome o;
  int checks = 0;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    const int size = 16 + (int)(seed * 7) % 49;  // <= 64
    Rng rng(seed);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(size, size);
    for (int i = 0; i < size; ++i) {
      h(i, i) = 2.0 * rng.uniform() - 1.0;
      if (i + 1 < size) {
        const double off = 2.0 * rng.uniform() - 1.0;
        h(i, i + 1) = off;
        h(i + 1, i) = off;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const int which = (int)(seed % 3);  // ground and low excited eigenvectors
    std::vector<double> psi(size);
    for (int i = 0; i < size; ++i) psi[i] = es.eigenvectors()(i, which);
    BandChain chain = make_chain(h, psi);

    int peak = 0;
    for (int i = 1; i < size; ++i)
      if (std::fabs(psi[i]) > std::fabs(psi[peak])) peak = i;

    for (int ell : {1, 2, 4, 8}) {
      for (int y : {peak, size / 2}) {
        auto cut = cut_item1(chain, y, ell);
        ++checks;
        if (!cut.bound_ok) {
          std::ostringstream m;
          m << "item 1 bound violated (seed " << seed << ", l=" << ell << ", y=" << y << ")";
          o.fail(m.str());
        }
      }
    }
    for (double eps : {0.01, 0.1, 0.5}) {
      auto t = tilt_item2(chain, eps);
      ++checks;
      if (!t.bound_ok) {
        std::ostringstream m;
        m << "item 2 bound violated (seed " << seed << ", eps=" << eps << ")";
        o.fail(m.str());
      }
    }
    for (int ell : {1, 2, 4, 8}) {
      for (double eps : {0.01, 0.1, 0.5}) {
        auto c3 = cut_item3(chain, chain.labels.front(), ell, eps);
        ++checks;
        if (!c3.has_value()) {
          o.fail("item 3 not applicable with z at the bottom label");
          continue;
        }
        if (!c3->bound_ok) {
          std::ostringstream m;
          m << "item 3 bound violated (seed " << seed << ", l=" << ell << ", eps=" << eps << ")";
          o.fail(m.str());
        }
      }
    }
  }
  o.detail << checks << " cut checks across 20 chains";
  return o;
}

Outcome criterion9(std::vector<BatteryEntry>& battery) {
  Outcome o;
  for (size_t i = 0; i < 10 && i < battery.size(); ++i) {
    auto& e = battery[i];
    RunConfig cfg;
    cfg.big_b = e.p.big_b;
    cfg.k = e.p.k;
    cfg.seed = 999 + i;
    auto r = simulate_unamplified(e.inst, cfg, e.mode, 10000);
    const double sigma = std::sqrt(r.p_ov * (1 - r.p_ov) / 10000.0);
    if (std::fabs(r.accept_rate - r.p_ov) > 3 * sigma) {
      std::ostringstream m;
      m << "acceptance rate off for battery instance " << i << " (" << r.accept_rate << " vs "
        << r.p_ov << ")";
      o.fail(m.str());
    }
    // hybrid: forced phase-2 must return a verified ground configuration
    RunConfig hcfg = cfg;
    hcfg.n_samp = 0;
    auto hy = hybrid_run(e.inst, hcfg, e.mode);
    if (hy.verdict != "exact") o.fail("hybrid with n_samp=0 did not output exact");
    if (energy_of(e.inst, hy.state) != e.e0) o.fail("hybrid exact state is not a ground state");
    // default run: any exact verdict must be verified too
    RunConfig dcfg = cfg;
    auto hy2 = hybrid_run(e.inst, dcfg, e.mode);
    if (hy2.verdict == "exact" && energy_of(e.inst, hy2.state) != e.e0)
      o.fail("hybrid default exact state is not a ground state");
  }
  o.detail << "10 instances, 1e4 trials each";
  return o;
}

Outcome criterion10() {
  Outcome o;
  const double t0 = now_seconds();
  static const std::pair<int, int> shapes[] = {{6, 2}, {8, 2}, {10, 2}, {6, 3}, {8, 3}, {10, 3}};
  int done = 0;
  uint64_t seed = 5000;
  while (done < 100) {
    const auto [n, d] = shapes[done % 6];
    Instance inst = random_instance(n, d, n + 2, {-1, 1}, seed++);
    auto tr = degeneracy_sequence(inst);
    const int kmax =
        tr.n_gs_initial <= 1 ? 0 : (int)std::ceil(std::log2((double)tr.n_gs_initial));
    if (tr.m > kmax) o.fail("m exceeds ceil(log2 n_gs)");
    if (!tr.halving_ok) o.fail("per-step halving violated");
    if (!tr.member_ok) o.fail("final ground not in the original ground set");

    Instance lifted = lift_to_uniform_degree(inst, tr.final_fields);
    auto lg = ground_configs(lifted);
    const uint64_t all = (1ull << lifted.n()) - 1;
    const bool deg_ok =
        (d % 2 == 1) ? (lg.size() == 1) : (lg.size() == 2 && (lg[0] ^ all) == lg[1]);
    if (!deg_ok) o.fail("degree lift violates the degeneracy assumption");
    ++done;
  }
  const double dt = now_seconds() - t0;
  if (dt > 120.0) o.fail("runtime above 2 minutes");
  o.detail << "100 instances, lift brute-forced; runtime " << dt << " s";
  return o;
}

Outcome criterion11() {
  Outcome o;
  int done = 0;
  uint64_t seed = 8000;
  while (done < 50) {
    const int n = 7 + (int)(seed % 3);
    const int d = 2 + (int)(seed % 2);
    Instance inst = random_instance(n, d, n + 3, {-1, 1}, seed++);
    Mode mode = mode_for(inst, "auto");
    StateVector v = random_unit(n, mode, seed * 31);
    auto dist = energy_distribution(inst, v);
    double cond = 0.0;
    for (auto& [e, pe] : dist.p_of_e) cond += pe * dist.s_of_e.at(e);
    if (std::fabs(s_comp(v) - (dist.marginal_entropy + cond)) > 1e-9)
      o.fail("entropy chain identity broken");
    auto hist = histogram(inst);
    auto dec = maxwell_decompose(hist, dist.p_of_e, dist.s_of_e);
    if (dec.achieved_entropy_bound < cond - 1e-12) o.fail("two-point bound below sum P(E)S(E)");
    if (std::fabs(dec.p * dec.e1 + (1 - dec.p) * dec.e2 - dec.mean) > 1e-9)
      o.fail("two-point mean constraint broken");
    ++done;
  }
  o.detail << "50 (instance, state) pairs";
  return o;
}

Outcome criterion12(std::vector<BatteryEntry>& battery) {
  Outcome o;
  int branch1 = 0, branch2 = 0;
  auto run_one = [&](const Instance& inst, Mode mode, double big_b, int k) {
    RunConfig cfg;
    cfg.big_b = big_b;
    cfg.k = k;
    try {
      auto r = dichotomy_report(inst, cfg, mode);
      if (r.branch != 1 && r.branch != 2) o.fail("no branch selected");
      if (r.branch == 1) ++branch1;
      if (r.branch == 2) {
        ++branch2;
        if (!r.psi_search.psi.has_value()) o.fail("branch 2 without an eigenvector witness");
        if (!r.localized.ok) o.fail("branch 2 localization failed: " + r.localized.failed_step);
        if (!r.certificate_ok) o.fail("branch 2 certificate bound unsatisfied");
        if (r.certificate.marginal_entropy > r.certificate.marginal_entropy_cap + 1e-9)
          o.fail("marginal entropy above log2(2 J_tot + 1)");
        double cond = 0.0;
        auto dist = energy_distribution(inst, r.localized.xi);
        for (auto& [e, pe] : dist.p_of_e) cond += pe * dist.s_of_e.at(e);
        if (r.certificate.decomposition.achieved_entropy_bound < cond - 1e-9)
          o.fail("branch 2 maxwell bound below conditional entropy");
      }
    } catch (const Error& e) {
      o.fail(std::string("dichotomy raised: ") + e.what());
    }
  };
  for (auto& e : battery) run_one(e.inst, e.mode, e.p.big_b, e.p.k);
  // engineered strong-field instances exercise the certificate branch
  {
    std::vector<CostTerm> terms;
    for (int i = 0; i < 5; ++i) terms.push_back({{i, i + 1}, -1});
    Instance chain6(6, 2, std::move(terms));
    run_one(chain6, Mode::even, 2.0 * chain6.j_tot(), 3);
    Instance odd(4, 3, {{{0, 1, 2}, -1}, {{1, 2, 3}, -2}, {{0, 1, 3}, -4}, {{0, 2, 3}, -8}});
    run_one(odd, Mode::full, 2.0 * odd.j_tot(), 3);
  }
  if (branch2 == 0) o.fail("no branch-2 case exercised");
  o.detail << branch1 << " branch-1, " << branch2 << " branch-2 reports";
  return o;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, Outcome>> results;
  const double t_start = now_seconds();

  results.emplace_back("criterion 1: micro-instance closed forms", criterion1());

  auto battery = build_battery(50);
  {
    const auto grid = grid21();
    for (auto& e : battery) e.scan = path_scan(e.inst, e.p.big_b, e.p.k, grid, e.mode);
  }
  const double t_battery = now_seconds();
  std::printf("-- battery of %zu instances scanned in %.1f s\n", battery.size(),
              t_battery - t_start);

  results.emplace_back("criterion 2: BW oracle equivalence", criterion2(battery));
  results.emplace_back("criterion 3: gap lemma + E^Q monotonicity", criterion3(battery));
  results.emplace_back("criterion 4: qgood gap >= 1/2", criterion4(battery));
  results.emplace_back("criterion 5: moment suite", criterion5());
  results.emplace_back("criterion 6: walk energy decay", criterion6(battery));
  results.emplace_back("criterion 7: log-Sobolev suite", criterion7(battery));
  results.emplace_back("criterion 8: cut lemma explicit constants", criterion8());
  results.emplace_back("criterion 9: algorithm simulation", criterion9(battery));
  results.emplace_back("criterion 10: appendix reduction", criterion10());
  results.emplace_back("criterion 11: maxwell decomposition exactness", criterion11());
  results.emplace_back("criterion 12: dichotomy coverage", criterion12(battery));

  int failures = 0;
  for (auto& [name, o] : results) {
    std::printf("[%s] %s%s%s\n", o.pass ? "PASS" : "FAIL", name.c_str(),
                o.detail.tellp() > 0 ? " -- " : "", o.detail.str().c_str());
    if (!o.pass) ++failures;
  }
  std::printf("acceptance: %zu criteria, %d failed, total %.1f s\n", results.size(), failures,
              now_seconds() - t_start);
  return failures == 0 ? 0 : 1;
}

#include "shortpath/algorithm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shortpath/bw.hpp"
#include "shortpath/rng.hpp"

namespace sp {

HsParams RunConfig::resolve(const Instance& inst, int64_t e0) const {
  if (b.has_value() == big_b.has_value())
    throw InputError("RunConfig: exactly one of b, B must be set");
  if (k.has_value() == c.has_value())
    throw InputError("RunConfig: exactly one of K, C must be set");
  double bb;
  if (b) {
    if (*b < 0.0 || *b >= 1.0) throw InputError("RunConfig: b must be in [0,1)");
    bb = *b * std::fabs((double)e0);  // B = -b E_0
  } else {
    bb = *big_b;
  }
  int kk = k ? *k : HsParams::k_from_c(inst.n(), *c);
  if (kk < 3 || kk % 2 == 0) throw InputError("RunConfig: K must be odd and >= 3");
  return HsParams(1.0, bb, kk);
}

double RunConfig::b_of(const Instance& inst, int64_t e0) const {
  const HsParams p = resolve(inst, e0);
  const double ae0 = std::fabs((double)e0);
  return ae0 > 0 ? p.big_b / ae0 : 0.0;
}

RunReport simulate_unamplified(const Instance& inst, const RunConfig& cfg, Mode mode, int trials) {
  const auto cfgs = ground_configs(inst);
  (void)ground_basis_index(inst, mode);  // degeneracy assumption gate
  const int64_t e0 = energy_of(inst, cfgs[0]);
  const HsParams p = cfg.resolve(inst, e0);

  SpectralReport rep = spectral_report(inst, p, mode);
  if (rep.gap <= 1e-10)
    throw PreconditionError("simulate_unamplified: degenerate ground of H_1, model violation");

  RunReport out;
  out.e01 = rep.e_ground;
  out.gap = rep.gap;
  const StateVector& gv = rep.ground_vec;
  const StateVector psi = plus_state(inst.n(), mode);
  const double ov = dot(psi, gv);
  out.p_ov = ov * ov;

  // Ground-state computational mass at energy E_0 (success probability given
  // acceptance, computed exactly).
  double gs_mass = 0.0;
  for (uint64_t u = 0; u < gv.dim(); ++u)
    if (energy_of(inst, u) == e0) gs_mass += gv.a[u] * gv.a[u];
  out.predicted_success = out.p_ov * gs_mass;

  // Spectral measure of psi_+: the accepted component is the ground state;
  // everything else is a lumped remainder that always rejects.
  Rng rng(cfg.seed);
  uint64_t accepts = 0, successes = 0;
  for (int t = 0; t < trials; ++t) {
    if (rng.uniform() >= out.p_ov) continue;
    ++accepts;
    SpinConfig u = sample_measurement(gv, rng);
    if (energy_of(inst, u) == e0) ++successes;
  }
  out.trials = (uint64_t)trials;
  out.accept_rate = (double)accepts / trials;
  out.success_given_accept = accepts ? (double)successes / accepts : 0.0;
  out.exact_success_rate = (double)successes / trials;
  out.expected_unamplified_tries = 1.0 / (out.p_ov * cfg.p_succ_target);
  out.expected_amplified_tries = amplified_time_estimate(out.p_ov, cfg.p_succ_target);
  const int n_mode = mode == Mode::even ? inst.n() - 1 : inst.n();
  out.speedup_exponent = 0.5 * n_mode - std::log2(out.expected_amplified_tries);
  return out;
}

double amplified_time_estimate(double p_ov, double p_succ) {
  const double pp = p_ov * p_succ;
  if (pp <= 0.0) return std::numeric_limits<double>::infinity();
  if (pp > 1.0) throw InputError("amplified_time_estimate: probability above 1");
  return std::ceil(M_PI / (4.0 * std::asin(std::sqrt(pp))));
}

HybridResult hybrid_run(const Instance& inst, const RunConfig& cfg, Mode mode) {
  const auto hist = histogram(inst);
  const int64_t e0 = hist.e0;
  const HsParams p = cfg.resolve(inst, e0);
  const double b = cfg.b_of(inst, e0);
  const int n = inst.n();
  const double jt = (double)inst.j_tot();
  const double kd = (double)p.k * inst.d();

  HybridResult out;
  out.e_approx =
      (double)e0 + (1.0 + cfg.eta) * (b * std::fabs((double)e0) + jt * kd * kd / ((double)n * n));

  uint64_t n_samp;
  if (cfg.n_samp) {
    n_samp = *cfg.n_samp;
  } else {
    // 2^{O(1) N / C} with unit constant; C = K / log2 N.
    const double c_eff = (double)p.k / std::log2((double)std::max(2, n));
    const double log2_samp = (double)n / c_eff;
    n_samp = (uint64_t)std::min(std::pow(2.0, std::min(log2_samp, 62.0)), std::pow(2.0, n));
  }

  Rng rng(cfg.seed);
  const uint64_t space = 1ull << n;
  for (uint64_t i = 0; i < n_samp; ++i) {
    const uint64_t u = rng.below(space);
    ++out.phase1_samples;
    if ((double)energy_of(inst, u) <= out.e_approx) {
      out.verdict = "approximate";
      out.state = {n, u};
      out.energy = energy_of(inst, u);
      return out;
    }
  }

  // Phase 2: simulated short-path trials in parallel with brute-force scan.
  SpectralReport rep = spectral_report(inst, p, mode);
  const StateVector psi = plus_state(n, mode);
  const double ov = dot(psi, rep.ground_vec);
  const double p_accept = ov * ov;
  uint64_t scan_pos = 0;
  const uint64_t chunk = 4096;
  for (;;) {
    // One unamplified trial.
    ++out.phase2_trials;
    if (rep.gap > 1e-10 && rng.uniform() < p_accept) {
      SpinConfig u = sample_measurement(rep.ground_vec, rng);
      if (energy_of(inst, u) == e0) {
        out.verdict = "exact";
        out.state = u;
        out.energy = e0;
        return out;
      }
    }
    // One brute-force chunk.
    for (uint64_t i = 0; i < chunk && scan_pos < space; ++i, ++scan_pos) {
      if (energy_of(inst, scan_pos) == e0) {
        ++out.scanned;
        out.verdict = "exact";
        out.state = {n, scan_pos};
        out.energy = e0;
        return out;
      }
      ++out.scanned;
    }
  }
}

DichotomyReport dichotomy_report(const Instance& inst, const RunConfig& cfg, Mode mode) {
  DichotomyReport r;
  const auto cfgs = ground_configs(inst);
  (void)ground_basis_index(inst, mode);  // degeneracy assumption gate
  const int64_t e0 = energy_of(inst, cfgs[0]);
  const HsParams p = cfg.resolve(inst, e0);
  r.b_used = cfg.b_of(inst, e0);
  r.spectral = spectral_report(inst, p, mode);

  // The two branches are exhaustive by construction: E^Q_{0,1} >= E_0 + 1/2 or not.
  if (r.spectral.qgood_flag) {
    r.branch = 1;
    r.p_ov = p_ov_exact(inst, p, mode);
    r.log2_amplified_time = std::log2(amplified_time_estimate(r.p_ov, cfg.p_succ_target));
    const int n = inst.n();
    r.theorem_exponent_diag =
        0.5 * n - (r.b_used / (2.0 * inst.d() * p.k)) * n * std::log2(std::exp(1.0));
    if (p.big_b == 0.0) r.note = "zero field: P_ov = 2^{-(N-1)} (even) / 2^{-N} (full), no speedup";
    if (!r.spectral.moment_flag)
      r.note += (r.note.empty() ? "" : "; ") +
                std::string("moment condition B^2 <0|(X/N)^{2K}|0> <= 1/2 fails");
    return r;
  }

  r.branch = 2;
  r.psi_search = find_psi(inst, p, mode);
  if (r.psi_search.psi) {
    r.localized = large_x_state(inst, p, *r.psi_search.psi, "fixedK");
    if (r.localized.ok) {
      r.certificate = qbad_certificate(inst, p, r.localized.xi, cfg.eta);
      r.certificate_ok = r.certificate.bound_satisfied;
    } else {
      r.note = "localization failed at step: " + r.localized.failed_step;
    }
  } else {
    r.note = r.psi_search.note;
  }
  return r;
}

}  // namespace sp

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "shortpath/entropy.hpp"
#include "shortpath/eigensolve.hpp"
#include "shortpath/hilbert.hpp"
#include "shortpath/instance.hpp"
#include "shortpath/localize.hpp"

namespace sp {

// Parameters of one algorithm run.  Exactly one of (b, big_b) and one of
// (k, c) must be set; B = b|E_0| and K = smallest odd integer >= C log2 N.
struct RunConfig {
  std::optional<double> b;      // in [0,1)
  std::optional<double> big_b;  // explicit B
  std::optional<int> k;
  std::optional<double> c;
  int trials = 10000;
  uint64_t seed = 1;
  double p_succ_target = 0.5;   // P_succ of the measurement algorithm
  double epsilon_model = 0.0;   // ideal projection (P_diab = 0)
  double eta = 0.01;
  std::optional<uint64_t> n_samp;  // hybrid phase-1 sample count override

  HsParams resolve(const Instance& inst, int64_t e0) const;
  double b_of(const Instance& inst, int64_t e0) const;  // B/|E_0|
};

struct RunReport {
  double p_ov = 0.0;                 // exact squared overlap
  double accept_rate = 0.0;          // empirical phase-estimate acceptance
  double success_given_accept = 0.0; // empirical
  double exact_success_rate = 0.0;   // empirical overall success frequency
  double predicted_success = 0.0;    // P_ov * ground-state computational mass at E_0
  double expected_unamplified_tries = 0.0;  // 1/(P_ov P_succ)
  double expected_amplified_tries = 0.0;    // Grover accounting
  double speedup_exponent = 0.0;     // log2(2^{N/2} / amplified tries), mode N
  uint64_t trials = 0;
  double e01 = 0.0, gap = 0.0;
};

// Ideal-measurement simulation of the single-measurement algorithm: sample an
// H_1 eigenstate from the spectral measure of psi_+, accept iff its energy is
// <= E_{0,1} + gap/2, then measure the computational basis.
RunReport simulate_unamplified(const Instance& inst, const RunConfig& cfg, Mode mode, int trials);

// Grover-style iteration count ceil(pi / (4 asin sqrt(p_ov p_succ)));
// accounting only.  Returns +infinity for zero probability.
double amplified_time_estimate(double p_ov, double p_succ);

struct HybridResult {
  std::string verdict;  // "approximate" | "exact"
  SpinConfig state;
  int64_t energy = 0;
  double e_approx = 0.0;
  uint64_t phase1_samples = 0;
  uint64_t phase2_trials = 0;
  uint64_t scanned = 0;
};

// Random sampling against E_approx = E_0 + (1+eta)(b|E_0| + unit term), then
// the simulated short-path algorithm interleaved with brute-force scan.
HybridResult hybrid_run(const Instance& inst, const RunConfig& cfg, Mode mode);

struct DichotomyReport {
  int branch = 0;  // 1: spectral-gap branch, 2: entropy-certificate branch
  SpectralReport spectral;
  double b_used = 0.0;
  // Branch 1 payload.
  double p_ov = 0.0;
  double log2_amplified_time = 0.0;
  double theorem_exponent_diag = 0.0;  // N/2 - (b/(2DK)) N log2 e, unit poly factor
  // Branch 2 payload.
  FindPsiResult psi_search;
  LocalizedState localized;
  EntropyCertificate certificate;
  bool certificate_ok = false;  // asserted (non-unit-constant) inequalities hold
  std::string note;
};

DichotomyReport dichotomy_report(const Instance& inst, const RunConfig& cfg, Mode mode);

}  // namespace sp

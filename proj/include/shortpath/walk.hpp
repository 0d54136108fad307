#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shortpath/hilbert.hpp"
#include "shortpath/instance.hpp"

namespace sp {

// <0|(X/N)^L|0> for a computational basis state: 2^{-n} sum_k C(n,k)((n-2k)/n)^L.
// Exactly 0 for odd L.  High-precision (long double, compensated) accumulation.
double x_moment(int n, int l);

// Cross moment <u|(X/N)^L|ubar> between a configuration and its global flip;
// exactly 0 for L < n.
double x_pair_moment(int n, int l);

// Moment of the mode basis state |0>: the pair superposition picks up the
// cross term in even mode.
double x_moment_mode(int n, int l, Mode mode);

struct MomentTable {
  int n = 0;
  std::vector<double> m;  // m[l], l = 0..l_max
};
MomentTable build_moment_table(int n, int l_max);

// Hypercube random walk, one step = K single-spin flips with replacement.
struct ReturnStats {
  int k = 0;
  std::vector<double> exact_return;  // P(return at step t), t = 1..t_max
  std::vector<double> p_nr_lower;    // 1 - sum_{s<=t} exact_return[s]
  std::vector<double> mc_freq;       // empirical return-at-t frequencies (empty if samples=0)
  uint64_t samples = 0;
};
ReturnStats return_probabilities(int n, int k, int t_max, uint64_t mc_samples = 0,
                                 uint64_t seed = 0);

struct EnergyDecay {
  std::vector<double> mean;       // sample mean of E_{u_m}, m = 0..t_max
  std::vector<double> std_error;
  std::vector<double> predicted;  // (1-2D/N)^{mK} E_0
  bool within_3sigma = false;
};
EnergyDecay mean_energy_decay(const Instance& inst, int k, int t_max, uint64_t samples,
                              uint64_t seed);

// Monte-Carlo lower-bound estimate of the overlap series
//   sum_t B^t E_nr,t[prod_m 1/(E_{u_m}-e01)] P_nr,t,
// a statistically consistent lower bound on 2^{N/2} <psi_+|phi_{0,1}>
// (2^{(N-1)/2} in even mode).  Truncation drops non-negative terms; the
// exact-moment P_nr lower bounds keep the estimate one-sided.
struct WalkEstimate {
  int t_max = 0;
  uint64_t samples = 0;
  std::vector<double> order_mean;    // conditional product means, t = 0..t_max
  std::vector<double> order_stderr;
  std::vector<double> p_nr;          // non-return probability lower bounds
  std::vector<double> partial_sum;   // cumulative series through order t
  double estimate = 0.0;             // partial_sum.back()
  double total_stderr = 0.0;
};
WalkEstimate overlap_lower_bound(const Instance& inst, const HsParams& p, double e01, int t_max,
                                 uint64_t samples, uint64_t seed);

std::string walk_csv(const ReturnStats& rs, const WalkEstimate* est = nullptr);

}  // namespace sp

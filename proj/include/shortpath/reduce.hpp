#pragma once

#include <cstdint>
#include <vector>

#include "shortpath/instance.hpp"

namespace sp {

// Ground set of H_Z (exhaustive); configurations sorted ascending.
std::vector<SpinConfig> enumerate_ground_set(const Instance& inst);

// Halving lemma: smallest spin i with 0 < n_i < |S| (n_i = count of v_i = +1,
// bit = 0) and sigma = +1 if n_i <= |S|/2 else -1, so that
// T = {v in S : v_i = sigma} has 1 <= |T| <= |S|/2.
std::pair<int, int> half_split(const std::vector<uint64_t>& ground_set, int n);

struct ReductionStep {
  int spin = 0;
  int sigma = 0;
  uint64_t ground_count_after = 0;
};

struct ReductionTrace {
  std::vector<ReductionStep> steps;
  std::vector<int> final_fields;  // h, the Hamiltonian is H_Z + sum h_i Z_i
  int m = 0;                      // step count
  uint64_t n_gs_initial = 0;
  uint64_t final_ground = 0;  // bits of the unique surviving ground state
  bool halving_ok = true;     // n_gs(a+1) <= n_gs(a)/2 at every step
  bool member_ok = true;      // final ground belongs to the original ground set
};

// Appendix symmetry-breaking sequence H^(a+1) = H^(a) - sigma Z_i down to a
// unique ground state; verifies the inductive field property at every step.
ReductionTrace degeneracy_sequence(const Instance& inst);

struct ChoiceCount {
  long double count = 0.0L;  // sum_{k=1..ceil(log2 n_gs)} 2^k C(n,k)
  long double bound = 0.0L;  // (2n)^{ceil(log2 n_gs)}
  bool ok = false;           // count <= bound
};
ChoiceCount choice_count_bound(int n, uint64_t n_gs);

}  // namespace sp

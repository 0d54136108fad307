#include "shortpath/reduce.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace sp {

std::vector<SpinConfig> enumerate_ground_set(const Instance& inst) {
  std::vector<SpinConfig> out;
  for (uint64_t bits : ground_configs(inst)) out.push_back({inst.n(), bits});
  return out;
}

std::pair<int, int> half_split(const std::vector<uint64_t>& ground_set, int n) {
  const uint64_t size = ground_set.size();
  if (size <= 1) throw PreconditionError("half_split: lemma requires |S| > 1");
  for (int i = 0; i < n; ++i) {
    uint64_t n_i = 0;  // count of v_i = +1, i.e. bit i clear
    for (uint64_t v : ground_set)
      if (((v >> i) & 1) == 0) ++n_i;
    if (n_i == 0 || n_i == size) continue;
    const int sigma = (2 * n_i <= size) ? +1 : -1;
    return {i, sigma};
  }
  throw NumericalError("half_split: no splitting coordinate found (|S| <= 1?)");
}

ReductionTrace degeneracy_sequence(const Instance& inst) {
  const int n = inst.n();
  ReductionTrace tr;
  tr.final_fields.assign(n, 0);

  std::vector<uint64_t> s = ground_configs(inst);
  tr.n_gs_initial = s.size();
  const std::vector<uint64_t> original = s;

  while (s.size() > 1) {
    auto [i, sigma] = half_split(s, n);
    if (tr.final_fields[i] != 0)
      throw NumericalError("degeneracy_sequence: split chose an already-fixed spin");
    // H^(a+1) = H^(a) - sigma Z_i, i.e. field coefficient h_i = -sigma.
    tr.final_fields[i] = -sigma;
    s = ground_configs_with_fields(inst, tr.final_fields);
    tr.steps.push_back({i, sigma, s.size()});

    // Inductive property: every ground state of H^(a+1) has v_j = -h_j for
    // all set fields.
    for (int j = 0; j < n; ++j) {
      if (tr.final_fields[j] == 0) continue;
      const int want_bit = (-tr.final_fields[j] == +1) ? 0 : 1;
      for (uint64_t v : s)
        if ((int)((v >> j) & 1) != want_bit)
          throw NumericalError("degeneracy_sequence: inductive field property violated");
    }
  }

  tr.m = (int)tr.steps.size();
  tr.final_ground = s.empty() ? 0 : s[0];
  uint64_t prev = tr.n_gs_initial;
  for (const auto& st : tr.steps) {
    if (!(st.ground_count_after >= 1 && st.ground_count_after <= prev / 2)) tr.halving_ok = false;
    prev = st.ground_count_after;
  }
  tr.member_ok = std::binary_search(original.begin(), original.end(), tr.final_ground);
  return tr;
}

ChoiceCount choice_count_bound(int n, uint64_t n_gs) {
  if (n_gs < 1) throw InputError("choice_count_bound: n_gs must be >= 1");
  ChoiceCount cc;
  const int kmax = (n_gs <= 1) ? 0 : (int)std::bit_width(n_gs - 1);  // ceil(log2 n_gs)
  long double binom = 1.0L;  // C(n, k), updated multiplicatively
  long double pow2 = 1.0L;
  for (int k = 1; k <= kmax; ++k) {
    binom = binom * (long double)(n - k + 1) / (long double)k;
    pow2 *= 2.0L;
    cc.count += pow2 * binom;
  }
  cc.bound = std::pow((long double)(2 * n), (long double)kmax);
  cc.ok = cc.count <= cc.bound;
  return cc;
}

}  // namespace sp

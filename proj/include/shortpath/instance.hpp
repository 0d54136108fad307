#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shortpath/errors.hpp"

namespace sp {

// One monomial of the cost function: a product of Z operators on `qubits`
// times an integer weight.  Qubit lists are sorted ascending and distinct.
struct CostTerm {
  std::vector<int> qubits;
  int64_t weight = 0;

  bool operator==(const CostTerm&) const = default;
};

// A spin configuration on n spins.  Bit i = 0 means Z_i = +1, bit i = 1 means
// Z_i = -1.  Configurations double as basis indices, so n <= 63.
struct SpinConfig {
  int n = 0;
  uint64_t bits = 0;

  uint64_t flipped_all() const { return bits ^ ((n == 64) ? ~0ull : ((1ull << n) - 1)); }
  std::string to_string() const;  // spin 0 first, '0' = +1, '1' = -1
  bool operator==(const SpinConfig&) const = default;
};

// Degree-D Ising cost Hamiltonian H_Z with integer weights.
// Immutable after construction; construction validates all invariants.
class Instance {
 public:
  Instance(int n, int d, std::vector<CostTerm> terms);

  int n() const { return n_; }
  int d() const { return d_; }
  const std::vector<CostTerm>& terms() const { return terms_; }
  int64_t j_tot() const { return j_tot_; }
  // beta = log(j_tot)/log(n), diagnostic only.
  double beta() const;

  // Per-term bitmasks, aligned with terms().
  const std::vector<uint64_t>& masks() const { return masks_; }

  bool operator==(const Instance& o) const {
    return n_ == o.n_ && d_ == o.d_ && terms_ == o.terms_;
  }

 private:
  int n_;
  int d_;
  std::vector<CostTerm> terms_;
  std::vector<uint64_t> masks_;
  int64_t j_tot_;
};

// Full density of states: W(E) for every attained energy.
struct EnergyHistogram {
  std::map<int64_t, uint64_t> counts;  // E -> W(E), zero counts absent
  int64_t e0 = 0;                      // ground energy
  uint64_t n_gs = 0;                   // W(e0)
};

// Non-throwing invariant check; returns one message per violation.
std::vector<std::string> validate(int n, int d, const std::vector<CostTerm>& terms);

int64_t energy_of(const Instance& inst, const SpinConfig& u);
int64_t energy_of(const Instance& inst, uint64_t bits);

// Energy of H_Z + sum_i h_i Z_i (used by the degeneracy reduction, where the
// intermediate Hamiltonians carry on-site fields).
int64_t energy_with_fields(const Instance& inst, const std::vector<int>& h, uint64_t bits);

// Exhaustive W(E) by Gray-code enumeration of all 2^n configurations.
// `cap` limits n (default from exhaustive_cap()).
EnergyHistogram histogram(const Instance& inst, std::optional<int> cap = std::nullopt);
EnergyHistogram histogram_with_fields(const Instance& inst, const std::vector<int>& h,
                                      std::optional<int> cap = std::nullopt);

// Enumeration cap; SHORTPATH_CAP_N overrides the default of 28.
int exhaustive_cap();

// All configurations attaining the ground energy (exhaustive).
std::vector<uint64_t> ground_configs(const Instance& inst, std::optional<int> cap = std::nullopt);
std::vector<uint64_t> ground_configs_with_fields(const Instance& inst, const std::vector<int>& h,
                                                 std::optional<int> cap = std::nullopt);

// m distinct qubit sets uniform without replacement, weights uniform from
// weight_set.  Deterministic for fixed seed.
Instance random_instance(int n, int d, int m, const std::vector<int64_t>& weight_set,
                         uint64_t seed);

// Appendix degree lift: H_Z + J + sum_i h_i Z_i Z_{n}..Z_{n+d-2} on n+d+1
// spins, J = all degree-d monomials on the d+1 ancillas with weight -1.
Instance lift_to_uniform_degree(const Instance& inst, const std::vector<int>& h);

// MAX-2-LIN2 -> UNIQUE-MAX-E2-LIN2: add spin 0, convert fields h_i Z_i into
// pair terms h_i Z_0 Z_{i+1}.  `pairs` holds ((i,j), J_ij) on spins 0..n-1.
Instance from_max2lin2(int n, const std::vector<std::pair<std::pair<int, int>, int64_t>>& pairs,
                       const std::vector<int64_t>& fields);

// Canonical JSON interchange format.
std::string to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

}  // namespace sp

#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "shortpath/hilbert.hpp"
#include "shortpath/instance.hpp"

namespace sp {

// Binary entropy S(x) = -x log2 x - (1-x) log2(1-x) and its lower-branch
// inverse on [0, 1/2] (bisection to 1e-12).
double binary_entropy(double x);
double inv_binary_entropy(double sigma);

// tau(sigma) = 2 sqrt(S^{-1}(sigma)(1 - S^{-1}(sigma))), increasing [0,1]->[0,1].
double tau(double sigma);
double tau_inv(double m);

struct LsiCheck {
  bool lsi1_ok = false;  // S >= (1 - 1/ln2) N + <X>/ln2
  bool lsi2_ok = false;  // tau(S/N) >= <X>/N
  double lsi1_slack = 0.0;
  double lsi2_slack = 0.0;
  double s_comp = 0.0;
  double x_expect = 0.0;
};
LsiCheck check_lsi(const StateVector& v);

struct TwoPointDecomposition {
  int64_t e1 = 0, e2 = 0;
  double p = 1.0;  // weight on e1
  double achieved_entropy_bound = 0.0;
  double mean = 0.0;
};

// Maximize sum_E P(E) log2 W(E) over distributions with the same mean energy
// as p_of_e; the optimum has support on at most two energies (exact search
// over all pairs).  s_of_e holds the conditional entropies of the input
// distribution, used to verify sum p(E) S(E) <= achieved bound.
TwoPointDecomposition maxwell_decompose(const EnergyHistogram& hist,
                                        const std::map<int64_t, double>& p_of_e,
                                        const std::map<int64_t, double>& s_of_e);

// Energy marginal P(E) and conditional entropies S(E) of the measurement
// distribution of a state (underlying computational outcomes).
struct EnergyDistribution {
  std::map<int64_t, double> p_of_e;
  std::map<int64_t, double> s_of_e;
  double mean = 0.0;
  double marginal_entropy = 0.0;  // -sum P log2 P
};
EnergyDistribution energy_distribution(const Instance& inst, const StateVector& v);

struct EntropyCertificate {
  std::string source;
  double s_comp = 0.0;
  double e_bar = 0.0;
  double x_expect = 0.0;
  double x0 = 0.0;     // center of the X-support window
  double x_min = 0.0;  // N (4B)^{-1/K}
  double entropy_bound = 0.0;  // N tau^{-1}((X0 - Xmin/K)/N), clamped; asserted
  bool bound_satisfied = false;
  bool vacuous = false;  // bound <= 0 (e.g. basis-state input)
  double f_of_s = 0.0;   // unit-constant F(S) evaluation; diagnostic only
  double eta = 0.0;
  double e_split_threshold = 0.0;  // E_0 + (1+eta)(b|E_0| + unit term); diagnostic
  TwoPointDecomposition decomposition;
  double marginal_entropy = 0.0;
  double marginal_entropy_cap = 0.0;  // log2(2 j_tot + 1); asserted upper bound
};

// Theorem-style entropy/energy certificate for a localized state Xi.
// Hidden O(1) constants are evaluated as 1 and labeled diagnostics.
EntropyCertificate qbad_certificate(const Instance& inst, const HsParams& p,
                                    const StateVector& xi, double eta);

}  // namespace sp

#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "shortpath/instance.hpp"
#include "shortpath/rng.hpp"

namespace sp {

// Basis convention.  `full` is the computational basis, dimension 2^n.
// `even` is the +1 sector of prod_i X_i, only valid for even d: basis vectors
// are (|u> + |ubar>)/sqrt(2) indexed by the numerically smaller member of the
// pair, i.e. indices in [0, 2^(n-1)).
enum class Mode { full, even };

const char* mode_name(Mode m);
Mode mode_for(const Instance& inst, const std::string& requested);  // "full"|"even"|"auto"

// Path-parameter / field-strength / exponent triple of H_s = H_Z - sB(X/N)^K.
struct HsParams {
  double s = 1.0;
  double big_b = 0.0;  // B
  int k = 3;           // K, odd

  HsParams() = default;
  HsParams(double s_, double b_, int k_);
  // K = smallest odd integer >= C log2(N), floored at 3.
  static int k_from_c(int n, double c);
};

// Real amplitude vector in a fixed mode.
struct StateVector {
  Mode mode = Mode::full;
  int n = 0;
  std::vector<double> a;

  size_t dim() const { return a.size(); }
  static size_t dim_for(Mode m, int n) { return 1ull << (m == Mode::even ? n - 1 : n); }
};

StateVector zero_state(int n, Mode m);
StateVector basis_state(int n, Mode m, uint64_t index);
StateVector plus_state(int n, Mode m);

double dot(const StateVector& a, const StateVector& b);
double norm(const StateVector& v);
void check_unit_norm(const StateVector& v, double tol = 1e-12);

// Pair representative in even mode: the numerically smaller of (u, ubar).
inline uint64_t even_rep(uint64_t u, int n) {
  const uint64_t bar = u ^ ((1ull << n) - 1);
  return u < bar ? u : bar;
}

StateVector to_full(const StateVector& v);
StateVector to_even(const StateVector& v);  // requires full input in the even sector

StateVector apply_hz(const Instance& inst, const StateVector& v);
StateVector apply_x(const StateVector& v);
// Allocation-free X application for solver inner loops; out is overwritten.
void apply_x_raw(Mode mode, int n, const std::vector<double>& in, std::vector<double>& out);
// (X/N)^K v by K repeated sparse applications.
StateVector apply_xn_pow(const StateVector& v, int k);
StateVector apply_hs(const Instance& inst, const HsParams& p, const StateVector& v);

double expect_hz(const Instance& inst, const StateVector& v);
double expect_x(const StateVector& v);
double expect_hs(const Instance& inst, const HsParams& p, const StateVector& v);

// Energies of basis states in the given mode (even mode: shared pair energy of
// the representative).
std::vector<double> mode_diagonal(const Instance& inst, Mode m);

// In-place unnormalized fast Walsh-Hadamard butterfly.
void wht(std::vector<double>& a);

// Weight on each X eigenvalue (n - 2k for k = 0..n): index k holds the squared
// mass on the eigenspace with eigenvalue n - 2k.
std::vector<double> x_spectrum_weights(const StateVector& v);

// Project onto X eigenvalues in the band [x*w, x*w + w).
StateVector band_project(const StateVector& v, int w, int x);

// (X/N)^K via the spectral transform; cross-check for apply_xn_pow.
StateVector apply_xn_pow_spectral(const StateVector& v, int k);

// Shannon entropy (bits) of the computational measurement distribution.  In
// even mode each pair contributes two equal outcomes.
double s_comp(const StateVector& v);

SpinConfig sample_measurement(const StateVector& v, Rng& rng);

// State dump / load for the CLI --dump-state flag.
std::string state_to_json(const StateVector& v);

}  // namespace sp

#pragma once

#include <optional>

#include "shortpath/eigensolve.hpp"
#include "shortpath/hilbert.hpp"
#include "shortpath/instance.hpp"

namespace sp {

// Self-consistent Brillouin-Wigner ground energy of H_s: the root of
//   E = E_0 + s<0|V|0> + s^2 <0|V G_s(E) V|0>,   V = -B(X/N)^K,
// solved by monotone bisection; each resolvent evaluation reuses one Krylov
// factorization of Q H_s Q and is verified against the stated residual.
double self_consistent_e01(const Instance& inst, const HsParams& p, Mode mode);

// Unnormalized eigenvector phi = |0> + s G_s(E_{0,s}) V |0>, <phi|0> = 1.
StateVector bw_state(const Instance& inst, const HsParams& p, Mode mode);

// P_ov = |<psi_+|psi_{0,1}>|^2 from the exact ground state.
double p_ov_exact(const Instance& inst, const HsParams& p, Mode mode);

struct BwBounds {
  bool applicable = false;       // E^Q_{0,1} >= E_0 + 1/2; checks skipped otherwise
  bool moment_condition = false; // B^2 <0|(X/N)^{2K}|0> <= 1/2
  bool eshift_ok = false;        // E_{0,1} >= E_0 - B m_K - 2 B^2 m_2K
  bool norm_ok = false;          // |phi|^2 <= 1 + 4 B^2 m_2K
  bool egood_ok = false;         // E_{0,1} >= E_0 - 1      (under moment_condition)
  bool normgood_ok = false;      // |phi| <= 2              (under moment_condition)
  double e01 = 0.0;
  double phi_norm_sq = 0.0;
  double m_k = 0.0, m_2k = 0.0;
};
BwBounds bound_checks(const Instance& inst, const HsParams& p, Mode mode);

// Radius of convergence in s of the Brillouin-Wigner series at omega
// (default: the self-consistent E_{0,1}); 1/spectral-radius of |g| QVQ |g|
// with g = (Q(omega - H_Z)Q)^{-1/2}.  Dense assembly, n <= 12.
// Returns +infinity when the spectral radius vanishes.
double convergence_radius(const Instance& inst, const HsParams& p, Mode mode,
                          std::optional<double> omega = std::nullopt);

struct BwReport {
  double e01 = 0.0;
  double phi_norm_sq = 0.0;
  double p_ov = 0.0;
  double radius = 0.0;  // +inf possible; NaN when skipped (dimension cap)
  BwBounds bounds;
};
BwReport bw_report(const Instance& inst, const HsParams& p, Mode mode, bool with_radius = true);

}  // namespace sp

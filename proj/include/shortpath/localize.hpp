#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "shortpath/eigensolve.hpp"
#include "shortpath/hilbert.hpp"
#include "shortpath/instance.hpp"

namespace sp {

// H_1 projected onto the normalized X-band components of a state Psi.
// Rows/columns are labeled by the original band index x (X eigenvalues in
// [x*w, x*w + w)); empty bands are contracted out but labels are kept, so
// window arithmetic stays in physical units.
struct BandChain {
  int width = 0;
  double energy = 0.0;    // Rayleigh quotient of Psi (its eigenvalue)
  double od_norm = 0.0;   // ||h_od|| bound used in the cut bounds
  double od_actual = 0.0; // operator norm of the off-diagonal part
  double eigen_residual = 0.0;
  bool bandwidth_ok = true;  // half-bandwidth <= ceil(2D/w) within 1e-10
  std::vector<int> labels;   // band indices, ascending
  std::vector<double> psi;   // psi(x) = |P_x Psi|
  Eigen::MatrixXd h;
  std::vector<StateVector> band_vecs;  // normalized P_x Psi (full mode); empty for synthetic chains
  int n = 0;
  Mode mode = Mode::full;
};

// Synthetic chain for the pure-matrix cut lemma (psi must be an eigenvector
// of h; labels default to 0..size-1).
BandChain make_chain(const Eigen::MatrixXd& h, const std::vector<double>& psi,
                     std::vector<int> labels = {});

BandChain band_chain(const Instance& inst, const HsParams& p, const StateVector& psi, int w);

// Result of a cut at the chain level.
struct ChainCut {
  std::vector<double> xi;  // normalized, indexed like chain.labels
  double energy = 0.0;     // <xi|h|xi>
  double bound = 0.0;      // asserted explicit-constant bound
  bool bound_ok = false;
  int support_lo = 0, support_hi = 0;  // label interval of nonzero entries
  std::string construction;
};

// Item 1: plateau-ramp cut at y with ramp length l; bound E + ||h_od||/l^2.
ChainCut cut_item1(const BandChain& chain, int y, int ell);

// Item 2: exponential tilt; bound E + (e^eps - 1)^2 ||h_od||.
struct TiltResult {
  std::vector<double> psi_eps;  // unnormalized tilted vector
  double ratio = 0.0;           // <psi_eps|h|psi_eps>/|psi_eps|^2
  double bound = 0.0;
  bool bound_ok = false;
};
TiltResult tilt_item2(const BandChain& chain, double eps);

// Item 3: windowed exponential cut above z; bound E + (1/l^2 + (e^eps-1)^2)
// ||h_od||.  Returns nullopt when the half-mass assumption fails.
std::optional<ChainCut> cut_item3(const BandChain& chain, int z, int ell, double eps);

struct FindPsiResult {
  bool applicable = false;  // E^Q_{0,1} < E_0 + 1/2
  double eq1 = 0.0;
  int64_t e0 = 0;
  std::optional<StateVector> psi;  // eigenvector with <B(X/N)^K> >= 1/4
  double psi_energy = 0.0;
  double moment_expect = 0.0;  // <Psi|B(X/N)^K|Psi>
  std::string note;            // counterexample report when psi is absent
};
FindPsiResult find_psi(const Instance& inst, const HsParams& p, Mode mode);

struct LocalizedState {
  bool ok = false;
  std::string failed_step;  // empty on success
  StateVector xi;           // reconstructed state, unit norm
  double window_lo = 0.0, window_hi = 0.0;  // declared X window [X0 - Xmin/K, X0 + Xmin/K]
  double x0 = 0.0, x_min = 0.0;
  double energy_h1 = 0.0;  // <Xi|H_1|Xi>
  double energy_hz = 0.0;
  double x_expect = 0.0;
  double bound = 0.0;  // E_Psi + (1/l^2 + (e^eps-1)^2) j_tot
  bool bound_ok = false;
  bool support_ok = false;  // X-support inside the declared window (amp 1e-12)
  int ell = 0;
  double eps = 0.0;
  std::string regime;
  // Unit-constant diagnostics, not asserted.
  double e2_diagnostic = 0.0;
  double e3_diagnostic = 0.0;
  double x_over_n = 0.0;
};

// Full localization pipeline: exponential-mass inequality, tilt, windowed cut,
// reconstruction Xi = sum_x xi(x) P_x Psi / |P_x Psi|.
LocalizedState large_x_state(const Instance& inst, const HsParams& p, const StateVector& psi,
                             const std::string& regime, std::optional<int> width = std::nullopt);

}  // namespace sp

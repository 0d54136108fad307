#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <vector>

#include "shortpath/hilbert.hpp"
#include "shortpath/instance.hpp"

namespace sp {

// Symmetric matrix-free operator: out = A * in.
using LinOp = std::function<void(const std::vector<double>&, std::vector<double>&)>;

struct EigenOptions {
  double tol = 1e-9;       // residual ||Av - lambda v||
  int max_iter = 600;
  int check_every = 4;     // Ritz convergence test cadence
  uint64_t noise_salt = 1; // start-vector noise stream
};

// H_s as a matrix-free operator with a precomputed diagonal.
class HsOperator {
 public:
  HsOperator(const Instance& inst, const HsParams& p, Mode mode);
  size_t dim() const { return diag_.size(); }
  Mode mode() const { return mode_; }
  int n() const { return n_; }
  const std::vector<double>& diagonal() const { return diag_; }
  bool is_diagonal() const { return p_.s == 0.0 || p_.big_b == 0.0; }
  void apply(const std::vector<double>& in, std::vector<double>& out) const;
  LinOp as_linop() const;

 private:
  HsParams p_;
  Mode mode_;
  int n_;
  std::vector<double> diag_;
  mutable std::vector<double> scratch_a_, scratch_b_;
};

struct RawEigPair {
  double value = 0.0;
  std::vector<double> vec;
  double residual = 0.0;
  int iterations = 0;
};

// Lowest eigenpair of `op` restricted orthogonal to `deflate`, by Lanczos with
// full reorthogonalization.  Falls back to dense diagonalization for
// dim <= 4096 if the iteration stalls; otherwise throws NumericalError.
RawEigPair lowest_eigenpair(const LinOp& op, size_t dim, const std::vector<double>& start,
                            const std::vector<std::vector<double>>& deflate,
                            const EigenOptions& opts = {});

// Krylov factorization A V = V T + beta_m v_{m+1} e_m^T for reuse by the
// Brillouin-Wigner resolvent evaluations.
struct KrylovFactorization {
  std::vector<double> alpha;               // T diagonal
  std::vector<double> beta;                // T offdiagonal (beta[i] couples i,i+1)
  std::vector<std::vector<double>> basis;  // orthonormal Lanczos vectors
  double last_beta = 0.0;                  // trailing beta (0 on exhaustion)
  bool exhausted = false;
};

using StopFn = std::function<bool(const std::vector<double>& alpha, const std::vector<double>& beta)>;

KrylovFactorization lanczos_factorize(const LinOp& op, size_t dim, const std::vector<double>& start,
                                      const std::vector<std::vector<double>>& deflate, int max_iter,
                                      const StopFn& stop, int check_every);

// Smallest eigenvalue of a symmetric tridiagonal matrix by Sturm bisection,
// and its eigenvector by inverse iteration.
double tridiag_smallest(const std::vector<double>& alpha, const std::vector<double>& beta);
std::vector<double> tridiag_eigvec(const std::vector<double>& alpha, const std::vector<double>& beta,
                                   double lambda);

// ---- instance-level spectral API ----

// Unique H_Z ground basis index in the given mode (degeneracy assumption);
// throws PreconditionError naming the degenerate configurations otherwise.
uint64_t ground_basis_index(const Instance& inst, Mode mode);

// Deterministic solver start vector: psi_+ perturbed by 1e-3 noise.
std::vector<double> solver_start(int n, Mode mode, uint64_t salt);

std::pair<double, StateVector> ground(const Instance& inst, const HsParams& p, Mode mode,
                                      const EigenOptions& opts = {});
double gap(const Instance& inst, const HsParams& p, Mode mode, const EigenOptions& opts = {});
double eq_ground(const Instance& inst, const HsParams& p, Mode mode, const EigenOptions& opts = {});

// Lowest m eigenpairs (ascending), stopping early once values exceed
// `ceiling` (the localize module only needs the low end of the spectrum).
std::vector<std::pair<double, StateVector>> lowest_eigenpairs(
    const Instance& inst, const HsParams& p, Mode mode, int m,
    std::optional<double> ceiling = std::nullopt, const EigenOptions& opts = {});

struct SpectralReport {
  HsParams params;
  double e_ground = 0.0;   // E_{0,s}
  double gap = 0.0;        // first excited minus ground
  double eq_ground = 0.0;  // E^Q_{0,s}
  StateVector ground_vec;
  bool qgood_flag = false;   // E^Q_{0,1} >= E_0 + 1/2
  bool moment_flag = false;  // B^2 <0|(X/N)^{2K}|0> <= 1/2
  double moment_2k = 0.0;
  int64_t e0 = 0;  // H_Z ground energy
};

SpectralReport spectral_report(const Instance& inst, const HsParams& p, Mode mode,
                               std::optional<double> eq_at_s1 = std::nullopt,
                               const EigenOptions& opts = {});

struct PathScan {
  std::vector<double> grid;
  std::vector<SpectralReport> points;
  std::vector<int> monotonicity_violations;  // indices i with eq[i] > eq[i-1] + 1e-8
};

PathScan path_scan(const Instance& inst, double big_b, int k, const std::vector<double>& grid,
                   Mode mode, const EigenOptions& opts = {});
std::string path_scan_csv(const PathScan& scan);

// Dense assembly (column by column); dim <= 4096.
Eigen::MatrixXd dense_operator(const LinOp& op, size_t dim);
Eigen::MatrixXd dense_hs_matrix(const Instance& inst, const HsParams& p, Mode mode);

}  // namespace sp

#include "shortpath/bw.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <sstream>

#include "shortpath/walk.hpp"

namespace sp {

namespace {

double vdot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0, c = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double y = a[i] * b[i] - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

double vnorm(const std::vector<double>& a) { return std::sqrt(vdot(a, a)); }

// Solve (T - E) z = e_1 for symmetric positive definite T - E (E below the
// Ritz spectrum); plain LDL^T elimination is stable here.
std::vector<double> spd_tridiag_solve_e1(const std::vector<double>& alpha,
                                         const std::vector<double>& beta, double e) {
  const size_t m = alpha.size();
  std::vector<double> d(m), rhs(m, 0.0);
  rhs[0] = 1.0;
  std::vector<double> z(m);
  d[0] = alpha[0] - e;
  for (size_t i = 1; i < m; ++i) {
    const double l = beta[i - 1] / d[i - 1];
    d[i] = (alpha[i] - e) - l * beta[i - 1];
    rhs[i] -= l * rhs[i - 1];
  }
  z[m - 1] = rhs[m - 1] / d[m - 1];
  for (size_t i = m - 1; i-- > 0;) z[i] = (rhs[i] - beta[i] * z[i + 1]) / d[i];
  return z;
}

// Shared machinery for the self-consistent energy and the BW state.
struct BwSolve {
  double e01 = 0.0;
  std::vector<double> x;  // G_s(e01) V |0>
  double w_norm = 0.0;
  double v00 = 0.0;
  uint64_t g_idx = 0;
  int64_t e0 = 0;
  Mode mode;
  int n = 0;
};

BwSolve solve_bw(const Instance& inst, const HsParams& p, Mode mode) {
  BwSolve out;
  out.mode = mode;
  out.n = inst.n();
  out.g_idx = ground_basis_index(inst, mode);
  {
    const auto cfgs = ground_configs(inst);
    out.e0 = energy_of(inst, cfgs[0]);
  }

  // V|0> = -B (X/N)^K e_g.
  StateVector vg = apply_xn_pow(basis_state(inst.n(), mode, out.g_idx), p.k);
  for (auto& a : vg.a) a *= -p.big_b;
  out.v00 = vg.a[out.g_idx];
  std::vector<double> w = vg.a;
  w[out.g_idx] = 0.0;
  out.w_norm = vnorm(w);

  if (p.s == 0.0 || p.big_b == 0.0 || out.w_norm == 0.0) {
    out.e01 = (double)out.e0 + p.s * out.v00;
    out.x.assign(StateVector::dim_for(mode, inst.n()), 0.0);
    return out;
  }

  const double eqs = eq_ground(inst, p, mode);
  HsOperator h(inst, p, mode);
  std::vector<double> e_g(h.dim(), 0.0);
  e_g[out.g_idx] = 1.0;
  std::vector<double> start = w;
  for (auto& a : start) a /= out.w_norm;

  const double scale = std::max(1.0, std::fabs((double)out.e0) + p.big_b);
  const double lo0 = (double)out.e0 - p.s * p.big_b;
  const double hi0 = std::min((double)out.e0, eqs - 1e-9 * scale);
  if (hi0 <= lo0 - 1e-12 * scale)
    throw PreconditionError("self_consistent_e01: E^Q crossing, series breakdown");

  int max_iter = 150;
  for (int attempt = 0;; ++attempt) {
    // Stop once the Krylov residual estimate of the linear system at the top
    // of the bracket (the point closest to the Q-spectrum) is safely inside
    // the verification threshold: the residual norm is |w| beta_m |y_m| for
    // the tridiagonal solution y, and the check allows 1e-10 max(1, |w|).
    auto stop = [&](const std::vector<double>& alpha, const std::vector<double>& beta) {
      std::vector<double> off(beta.begin(), beta.end() - 1);
      if (tridiag_smallest(alpha, off) <= hi0) return false;  // Ritz not yet below-safe
      const auto y = spd_tridiag_solve_e1(alpha, off, hi0);
      return beta.back() * std::fabs(y.back()) <= 0.3e-10;
    };
    KrylovFactorization f =
        lanczos_factorize(h.as_linop(), h.dim(), start, {e_g}, max_iter, stop, 4);

    const double tmin = tridiag_smallest(f.alpha, f.beta);
    if (tmin <= hi0) {
      // Krylov spectrum dipped below the bracket top; the bracket cap from
      // eq_ground already guards this, so treat as breakdown.
      throw PreconditionError("self_consistent_e01: resolvent not definite below E^Q");
    }

    // F(E) = E_0 + s v00 + s^2 |w|^2 e1^T (E-T)^{-1} e1 - E, strictly decreasing.
    auto feval = [&](double e) {
      const double q = -spd_tridiag_solve_e1(f.alpha, f.beta, e)[0];  // e1^T (E-T)^{-1} e1
      return (double)out.e0 + p.s * out.v00 + p.s * p.s * out.w_norm * out.w_norm * q - e;
    };
    double lo = lo0, hi = hi0;
    if (feval(hi) > 0.0)
      throw PreconditionError("self_consistent_e01: no root below E^Q, series breakdown");
    if (feval(lo) < 0.0) lo = lo0 - 1.0;  // guard: widen once for rounding at the edge
    if (feval(lo) < 0.0)
      throw NumericalError("self_consistent_e01: bracket failure at lower edge");
    for (int it = 0; it < 200 && hi - lo > 1e-14 * scale; ++it) {
      const double mid = 0.5 * (lo + hi);
      (feval(mid) >= 0.0 ? lo : hi) = mid;
    }
    const double e01 = 0.5 * (lo + hi);

    // x = (e01 - A)^{-1} w from the same Krylov basis; verify the residual.
    std::vector<double> z = spd_tridiag_solve_e1(f.alpha, f.beta, e01);
    std::vector<double> x(h.dim(), 0.0);
    for (size_t j = 0; j < f.basis.size(); ++j) {
      const double coef = -out.w_norm * z[j];
      for (size_t i = 0; i < x.size(); ++i) x[i] += coef * f.basis[j][i];
    }
    std::vector<double> ax(h.dim());
    h.apply(x, ax);
    ax[out.g_idx] = 0.0;  // Q projection
    double rq = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
      const double r = e01 * x[i] - ax[i] - w[i];
      rq += r * r;
    }
    const double resid = std::sqrt(rq);
    if (resid <= 1e-10 * std::max(1.0, out.w_norm) || f.exhausted) {
      out.e01 = e01;
      out.x = std::move(x);
      return out;
    }
    if (attempt >= 4 || (size_t)max_iter >= h.dim()) {
      std::ostringstream msg;
      msg << "self_consistent_e01: resolvent solve residual " << resid << " exceeds 1e-10";
      throw NumericalError(msg.str());
    }
    max_iter *= 2;
  }
}

}  // namespace

double self_consistent_e01(const Instance& inst, const HsParams& p, Mode mode) {
  return solve_bw(inst, p, mode).e01;
}

StateVector bw_state(const Instance& inst, const HsParams& p, Mode mode) {
  BwSolve s = solve_bw(inst, p, mode);
  StateVector phi = basis_state(inst.n(), mode, s.g_idx);
  for (size_t i = 0; i < phi.a.size(); ++i) phi.a[i] += p.s * s.x[i];
  return phi;
}

double p_ov_exact(const Instance& inst, const HsParams& p, Mode mode) {
  auto [e, v] = ground(inst, p, mode);
  const double ov = dot(plus_state(inst.n(), mode), v);
  return ov * ov;
}

BwBounds bound_checks(const Instance& inst, const HsParams& p, Mode mode) {
  BwBounds b;
  const HsParams p1(1.0, p.big_b, p.k);
  const auto cfgs = ground_configs(inst);
  const int64_t e0 = energy_of(inst, cfgs[0]);
  const double eq1 = eq_ground(inst, p1, mode);
  b.m_k = x_moment_mode(inst.n(), p.k, mode);
  b.m_2k = x_moment_mode(inst.n(), 2 * p.k, mode);
  b.moment_condition = p.big_b * p.big_b * b.m_2k <= 0.5 + 1e-12;
  b.applicable = eq1 >= (double)e0 + 0.5 - 1e-12;
  if (!b.applicable) return b;

  b.e01 = self_consistent_e01(inst, p1, mode);
  StateVector phi = bw_state(inst, p1, mode);
  b.phi_norm_sq = dot(phi, phi);

  const double bb = p.big_b;
  b.eshift_ok = b.e01 >= (double)e0 - bb * b.m_k - 2.0 * bb * bb * b.m_2k - 1e-9;
  b.norm_ok = b.phi_norm_sq <= 1.0 + 4.0 * bb * bb * b.m_2k + 1e-9;
  if (b.moment_condition) {
    b.egood_ok = b.e01 >= (double)e0 - 1.0 - 1e-9;
    b.normgood_ok = std::sqrt(b.phi_norm_sq) <= 2.0 + 1e-9;
  }
  return b;
}

double convergence_radius(const Instance& inst, const HsParams& p, Mode mode,
                          std::optional<double> omega) {
  if (inst.n() > 12)
    throw ResourceError("convergence_radius: dense assembly capped at n <= 12");
  if (p.big_b == 0.0) return std::numeric_limits<double>::infinity();
  const uint64_t g_idx = ground_basis_index(inst, mode);
  const double w = omega ? *omega : self_consistent_e01(inst, HsParams(1.0, p.big_b, p.k), mode);

  const auto diag = mode_diagonal(inst, mode);
  const size_t dim = diag.size();
  // |g| = (Q (H_Z - omega) Q)^{-1/2} is diagonal; omega < E_0 <= E_u keeps it real.
  std::vector<double> ginv(dim, 0.0);
  for (size_t u = 0; u < dim; ++u) {
    if (u == g_idx) continue;
    const double gap = diag[u] - w;
    if (gap <= 0.0)
      throw PreconditionError("convergence_radius: omega not below the Q-spectrum of H_Z");
    ginv[u] = 1.0 / std::sqrt(gap);
  }

  // Columns of V = -B (X/N)^K, projected and scaled: M = |g| QVQ |g|.
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (size_t col = 0; col < dim; ++col) {
    if (col == g_idx) continue;
    StateVector e = basis_state(inst.n(), mode, col);
    StateVector ve = apply_xn_pow(e, p.k);
    for (size_t row = 0; row < dim; ++row) {
      if (row == g_idx) continue;
      m((Eigen::Index)row, (Eigen::Index)col) = -p.big_b * ve.a[row] * ginv[row] * ginv[col];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()),
                                                    Eigen::EigenvaluesOnly);
  double rho = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    rho = std::max(rho, std::fabs(es.eigenvalues()(i)));
  if (rho < 1e-300) return std::numeric_limits<double>::infinity();
  return 1.0 / rho;
}

BwReport bw_report(const Instance& inst, const HsParams& p, Mode mode, bool with_radius) {
  BwReport r;
  r.e01 = self_consistent_e01(inst, p, mode);
  StateVector phi = bw_state(inst, p, mode);
  r.phi_norm_sq = dot(phi, phi);
  r.p_ov = p_ov_exact(inst, p, mode);
  r.bounds = bound_checks(inst, p, mode);
  r.radius = std::numeric_limits<double>::quiet_NaN();
  if (with_radius && inst.n() <= 12) r.radius = convergence_radius(inst, p, mode);
  return r;
}

}  // namespace sp

#include "shortpath/eigensolve.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include "shortpath/rng.hpp"
#include "shortpath/walk.hpp"

namespace sp {

namespace {

constexpr size_t kDenseCap = 4096;
constexpr size_t kIterativeCap = 1ull << 22;

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

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void project_off(const std::vector<std::vector<double>>& dirs, std::vector<double>& w) {
  for (const auto& d : dirs) axpy(-vdot(d, w), d, w);
}

void fix_sign(std::vector<double>& v) {
  size_t imax = 0;
  for (size_t i = 1; i < v.size(); ++i)
    if (std::fabs(v[i]) > std::fabs(v[imax])) imax = i;
  if (v[imax] < 0)
    for (auto& x : v) x = -x;
}

}  // namespace

HsOperator::HsOperator(const Instance& inst, const HsParams& p, Mode mode)
    : p_(p), mode_(mode), n_(inst.n()), diag_(mode_diagonal(inst, mode)) {
  if (diag_.size() > kIterativeCap)
    throw ResourceError("HsOperator: dimension exceeds iterative-solver cap");
  scratch_a_.resize(diag_.size());
  scratch_b_.resize(diag_.size());
}

void HsOperator::apply(const std::vector<double>& in, std::vector<double>& out) const {
  out.resize(in.size());
  for (size_t i = 0; i < in.size(); ++i) out[i] = diag_[i] * in[i];
  if (is_diagonal()) return;
  // (X/N)^K by K sparse applications, ping-pong between scratch buffers.
  const double inv_n = 1.0 / n_;
  const std::vector<double>* src = &in;
  for (int round = 0; round < p_.k; ++round) {
    std::vector<double>& dst = (round % 2 == 0) ? scratch_a_ : scratch_b_;
    apply_x_raw(mode_, n_, *src, dst);
    for (auto& x : dst) x *= inv_n;
    src = &dst;
  }
  const double c = p_.s * p_.big_b;
  for (size_t i = 0; i < in.size(); ++i) out[i] -= c * (*src)[i];
}

LinOp HsOperator::as_linop() const {
  return [this](const std::vector<double>& in, std::vector<double>& out) { apply(in, out); };
}

// ---- tridiagonal utilities ----

namespace {

// Number of eigenvalues of T strictly below x (Sturm sequence).
int sturm_count(const std::vector<double>& alpha, const std::vector<double>& beta, double x) {
  int cnt = 0;
  double d = 1.0;
  for (size_t i = 0; i < alpha.size(); ++i) {
    const double bb = (i == 0) ? 0.0 : beta[i - 1] * beta[i - 1];
    d = (alpha[i] - x) - bb / d;
    if (d == 0.0) d = -1e-300;
    if (d < 0.0) ++cnt;
  }
  return cnt;
}

}  // namespace

double tridiag_smallest(const std::vector<double>& alpha, const std::vector<double>& beta) {
  const size_t m = alpha.size();
  if (m == 1) return alpha[0];
  double lo = alpha[0], hi = alpha[0];
  for (size_t i = 0; i < m; ++i) {
    const double bl = (i > 0) ? std::fabs(beta[i - 1]) : 0.0;
    const double br = (i + 1 < m) ? std::fabs(beta[i]) : 0.0;
    lo = std::min(lo, alpha[i] - bl - br);
    hi = std::max(hi, alpha[i] + bl + br);
  }
  const double scale = std::max({1.0, std::fabs(lo), std::fabs(hi)});
  for (int it = 0; it < 200 && hi - lo > 1e-15 * scale; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(alpha, beta, mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> tridiag_eigvec(const std::vector<double>& alpha,
                                   const std::vector<double>& beta, double lambda) {
  const size_t m = alpha.size();
  if (m == 1) return {1.0};
  double scale = 0.0;
  for (double a : alpha) scale = std::max(scale, std::fabs(a));
  for (double b : beta) scale = std::max(scale, std::fabs(b));
  scale = std::max(scale, 1.0);

  // Inverse iteration with a slightly shifted, guarded Thomas solve.
  std::vector<double> y(m, 1.0 / std::sqrt((double)m));
  const double shift = lambda + 1e-13 * scale;
  std::vector<double> c(m), e(m > 1 ? m - 1 : 0), rhs(m);
  for (int sweep = 0; sweep < 3; ++sweep) {
    for (size_t i = 0; i < m; ++i) c[i] = alpha[i] - shift;
    for (size_t i = 0; i + 1 < m; ++i) e[i] = beta[i];
    rhs = y;
    for (size_t i = 0; i + 1 < m; ++i) {  // forward elimination, no pivoting
      if (std::fabs(c[i]) < 1e-280) c[i] = (c[i] < 0 ? -1e-280 : 1e-280);
      const double mfac = e[i] / c[i];
      c[i + 1] -= mfac * e[i];
      rhs[i + 1] -= mfac * rhs[i];
    }
    if (std::fabs(c[m - 1]) < 1e-280) c[m - 1] = (c[m - 1] < 0 ? -1e-280 : 1e-280);
    y[m - 1] = rhs[m - 1] / c[m - 1];
    for (size_t i = m - 1; i-- > 0;) y[i] = (rhs[i] - e[i] * y[i + 1]) / c[i];
    double nrm = 0.0;
    for (double v : y) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (!(nrm > 0) || !std::isfinite(nrm)) {  // restart from a shifted seed
      for (size_t i = 0; i < m; ++i) y[i] = ((i * 2654435761u) % 97) / 97.0 - 0.5;
      continue;
    }
    for (double& v : y) v /= nrm;
  }

  // Verify on T; fall back to a dense tridiagonal solve if inverse iteration
  // was derailed by an unlucky pivot.
  double resid = 0.0;
  for (size_t i = 0; i < m; ++i) {
    double r = (alpha[i] - lambda) * y[i];
    if (i > 0) r += beta[i - 1] * y[i - 1];
    if (i + 1 < m) r += beta[i] * y[i + 1];
    resid = std::max(resid, std::fabs(r));
  }
  if (resid > 1e-8 * scale) {
    Eigen::Map<const Eigen::VectorXd> ad(alpha.data(), m);
    Eigen::Map<const Eigen::VectorXd> bd(beta.data(), m - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(ad, bd);
    int best = 0;
    for (int i = 1; i < (int)m; ++i)
      if (es.eigenvalues()(i) < es.eigenvalues()(best)) best = i;
    for (size_t i = 0; i < m; ++i) y[i] = es.eigenvectors()(i, best);
  }
  return y;
}

// ---- Lanczos ----

KrylovFactorization lanczos_factorize(const LinOp& op, size_t dim,
                                      const std::vector<double>& start,
                                      const std::vector<std::vector<double>>& deflate,
                                      int max_iter, const StopFn& stop, int check_every) {
  if (start.size() != dim) throw InputError("lanczos: start vector dimension mismatch");
  KrylovFactorization f;
  std::vector<double> v = start;
  project_off(deflate, v);
  double nv = vnorm(v);
  if (nv < 1e-10) {
    // Start lies (almost) in the deflated span; fall back to a noise start.
    Rng rng(0x6e6f6973ull);
    for (auto& x : v) x = rng.uniform() - 0.5;
    project_off(deflate, v);
    nv = vnorm(v);
    if (nv < 1e-12) throw NumericalError("lanczos: no admissible start vector");
  }
  for (auto& x : v) x /= nv;
  f.basis.push_back(v);

  const int iters = std::max(1, std::min<int>(max_iter, (int)dim));
  std::vector<double> w(dim);
  double scale = 1.0;
  for (int j = 0; j < iters; ++j) {
    op(f.basis[j], w);
    const double alpha = vdot(w, f.basis[j]);
    f.alpha.push_back(alpha);
    axpy(-alpha, f.basis[j], w);
    if (j > 0) axpy(-f.beta[j - 1], f.basis[j - 1], w);
    project_off(deflate, w);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : f.basis) axpy(-vdot(b, w), b, w);
    const double beta = vnorm(w);
    f.beta.push_back(beta);
    f.last_beta = beta;
    scale = std::max({scale, std::fabs(alpha), beta});
    if (beta <= 1e-12 * scale) {
      f.exhausted = true;
      break;
    }
    const bool at_cap = (j + 1 == iters) || (f.basis.size() >= dim - deflate.size());
    if (((j + 1) % check_every == 0 || at_cap) && stop && stop(f.alpha, f.beta)) break;
    if (at_cap) break;
    std::vector<double> next(dim);
    for (size_t i = 0; i < dim; ++i) next[i] = w[i] / beta;
    f.basis.push_back(std::move(next));
  }
  // Trailing beta couples to the next (unstored) vector; on exhaustion T is exact.
  f.beta.pop_back();
  return f;
}

RawEigPair lowest_eigenpair(const LinOp& op, size_t dim, const std::vector<double>& start,
                            const std::vector<std::vector<double>>& deflate,
                            const EigenOptions& opts) {
  auto stop = [&](const std::vector<double>& alpha, const std::vector<double>& beta) {
    const size_t m = alpha.size();
    if (m < 2) return false;
    std::vector<double> off(beta.begin(), beta.end() - 1);
    const double lam = tridiag_smallest(alpha, off);
    const auto s = tridiag_eigvec(alpha, off, lam);
    return beta.back() * std::fabs(s.back()) <= 0.5 * opts.tol;
  };

  KrylovFactorization f =
      lanczos_factorize(op, dim, start, deflate, opts.max_iter, stop, opts.check_every);

  const double lam = tridiag_smallest(f.alpha, f.beta);
  const auto s = tridiag_eigvec(f.alpha, f.beta, lam);
  RawEigPair out;
  out.value = lam;
  out.iterations = (int)f.alpha.size();
  out.vec.assign(dim, 0.0);
  for (size_t j = 0; j < f.basis.size(); ++j) axpy(s[j], f.basis[j], out.vec);
  const double nv = vnorm(out.vec);
  for (auto& x : out.vec) x /= nv;
  fix_sign(out.vec);

  std::vector<double> r(dim);
  op(out.vec, r);
  project_off(deflate, r);  // residual within the deflated subspace
  axpy(-lam, out.vec, r);
  out.residual = vnorm(r);
  if (out.residual <= opts.tol) return out;

  if (dim <= kDenseCap) {
    // Dense fallback: assemble P A P and take the lowest eigenpair orthogonal
    // to the deflated directions.
    Eigen::MatrixXd a(dim, dim);
    std::vector<double> col(dim), in(dim, 0.0);
    for (size_t jcol = 0; jcol < dim; ++jcol) {
      in.assign(dim, 0.0);
      in[jcol] = 1.0;
      project_off(deflate, in);
      op(in, col);
      project_off(deflate, col);
      for (size_t i = 0; i < dim; ++i) a(i, jcol) = col[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (a + a.transpose()));
    for (int idx = 0; idx < (int)dim; ++idx) {
      std::vector<double> v(dim);
      for (size_t i = 0; i < dim; ++i) v[i] = es.eigenvectors()(i, idx);
      double overlap = 0.0;
      for (const auto& d : deflate) overlap = std::max(overlap, std::fabs(vdot(d, v)));
      if (overlap > 1e-8) continue;
      fix_sign(v);
      std::vector<double> rr(dim);
      op(v, rr);
      project_off(deflate, rr);
      axpy(-es.eigenvalues()(idx), v, rr);
      return {es.eigenvalues()(idx), std::move(v), vnorm(rr), (int)f.alpha.size()};
    }
  }
  std::ostringstream msg;
  msg << "lanczos failed to converge: residual " << out.residual << " after " << out.iterations
      << " iterations (tol " << opts.tol << ")";
  throw NumericalError(msg.str());
}

// ---- instance-level API ----

uint64_t ground_basis_index(const Instance& inst, Mode mode) {
  auto configs = ground_configs(inst);
  const uint64_t all = (1ull << inst.n()) - 1;
  if (mode == Mode::full) {
    if (configs.size() == 1) return configs[0];
  } else {
    if (configs.size() == 2 && (configs[0] ^ all) == configs[1])
      return even_rep(configs[0], inst.n());
  }
  std::ostringstream msg;
  msg << "degeneracy assumption violated in " << mode_name(mode) << " mode: " << configs.size()
      << " ground configurations:";
  for (size_t i = 0; i < configs.size() && i < 8; ++i)
    msg << " " << SpinConfig{inst.n(), configs[i]}.to_string();
  if (configs.size() > 8) msg << " ...";
  throw PreconditionError(msg.str());
}

std::vector<double> solver_start(int n, Mode mode, uint64_t salt) {
  StateVector psi = plus_state(n, mode);
  Rng rng = Rng::stream(0x53545254ull, salt);
  for (auto& x : psi.a) x += 1e-3 * (2.0 * rng.uniform() - 1.0);
  return psi.a;
}

namespace {

std::pair<double, StateVector> diagonal_ground(const HsOperator& h) {
  const auto& d = h.diagonal();
  size_t imin = 0;
  for (size_t i = 1; i < d.size(); ++i)
    if (d[i] < d[imin]) imin = i;
  StateVector v = basis_state(h.n(), h.mode(), imin);
  return {d[imin], v};
}

StateVector wrap_vec(const HsOperator& h, std::vector<double> raw) {
  StateVector v;
  v.mode = h.mode();
  v.n = h.n();
  v.a = std::move(raw);
  return v;
}

}  // namespace

std::pair<double, StateVector> ground(const Instance& inst, const HsParams& p, Mode mode,
                                      const EigenOptions& opts) {
  HsOperator h(inst, p, mode);
  if (h.is_diagonal()) return diagonal_ground(h);
  EigenOptions o = opts;
  o.noise_salt = 1;
  auto pair = lowest_eigenpair(h.as_linop(), h.dim(), solver_start(inst.n(), mode, 1), {}, o);
  return {pair.value, wrap_vec(h, std::move(pair.vec))};
}

double gap(const Instance& inst, const HsParams& p, Mode mode, const EigenOptions& opts) {
  HsOperator h(inst, p, mode);
  if (h.is_diagonal()) {
    std::vector<double> d = h.diagonal();
    std::nth_element(d.begin(), d.begin() + 1, d.end());
    const double g = d[1] - *std::min_element(d.begin(), d.begin() + 2);
    return g < 1e-10 ? 0.0 : g;
  }
  auto [e0, v0] = ground(inst, p, mode, opts);
  auto second =
      lowest_eigenpair(h.as_linop(), h.dim(), solver_start(inst.n(), mode, 2), {v0.a}, opts);
  const double g = second.value - e0;
  return (g < 1e-10) ? 0.0 : g;
}

double eq_ground(const Instance& inst, const HsParams& p, Mode mode, const EigenOptions& opts) {
  const uint64_t g_idx = ground_basis_index(inst, mode);
  HsOperator h(inst, p, mode);
  if (h.is_diagonal()) {
    const auto& d = h.diagonal();
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < d.size(); ++i)
      if (i != g_idx) best = std::min(best, d[i]);
    return best;
  }
  std::vector<double> e_g(h.dim(), 0.0);
  e_g[g_idx] = 1.0;
  auto pair =
      lowest_eigenpair(h.as_linop(), h.dim(), solver_start(inst.n(), mode, 3), {e_g}, opts);
  return pair.value;
}

std::vector<std::pair<double, StateVector>> lowest_eigenpairs(const Instance& inst,
                                                              const HsParams& p, Mode mode, int m,
                                                              std::optional<double> ceiling,
                                                              const EigenOptions& opts) {
  HsOperator h(inst, p, mode);
  std::vector<std::pair<double, StateVector>> out;
  if (h.is_diagonal()) {
    std::vector<size_t> idx(h.dim());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](size_t a, size_t b) { return h.diagonal()[a] < h.diagonal()[b]; });
    for (int i = 0; i < m && i < (int)idx.size(); ++i) {
      const double val = h.diagonal()[idx[i]];
      if (ceiling && val > *ceiling) break;
      out.emplace_back(val, basis_state(h.n(), h.mode(), idx[i]));
    }
    return out;
  }
  std::vector<std::vector<double>> deflate;
  for (int i = 0; i < m && deflate.size() < h.dim(); ++i) {
    auto pair = lowest_eigenpair(h.as_linop(), h.dim(),
                                 solver_start(inst.n(), mode, 10 + (uint64_t)i), deflate, opts);
    if (ceiling && pair.value > *ceiling) break;
    deflate.push_back(pair.vec);
    out.emplace_back(pair.value, wrap_vec(h, std::move(pair.vec)));
  }
  return out;
}

SpectralReport spectral_report(const Instance& inst, const HsParams& p, Mode mode,
                               std::optional<double> eq_at_s1, const EigenOptions& opts) {
  SpectralReport r;
  r.params = p;
  auto configs = ground_configs(inst);
  r.e0 = energy_of(inst, configs[0]);
  auto [e, v] = ground(inst, p, mode, opts);
  r.e_ground = e;
  r.ground_vec = std::move(v);
  r.gap = gap(inst, p, mode, opts);
  r.eq_ground = eq_ground(inst, p, mode, opts);
  double eq1 = r.eq_ground;
  if (p.s != 1.0)
    eq1 = eq_at_s1 ? *eq_at_s1 : eq_ground(inst, HsParams(1.0, p.big_b, p.k), mode, opts);
  r.moment_2k = x_moment_mode(inst.n(), 2 * p.k, mode);
  r.qgood_flag = eq1 >= (double)r.e0 + 0.5;
  r.moment_flag = p.big_b * p.big_b * r.moment_2k <= 0.5;
  return r;
}

PathScan path_scan(const Instance& inst, double big_b, int k, const std::vector<double>& grid,
                   Mode mode, const EigenOptions& opts) {
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw InputError("path_scan: s grid must be sorted ascending");
  if (!grid.empty() && (grid.front() < 0.0 || grid.back() > 1.0))
    throw InputError("path_scan: s grid must lie in [0,1]");
  PathScan scan;
  scan.grid = grid;
  const double eq1 = eq_ground(inst, HsParams(1.0, big_b, k), mode, opts);
  for (double s : grid)
    scan.points.push_back(spectral_report(inst, HsParams(s, big_b, k), mode, eq1, opts));
  for (size_t i = 1; i < scan.points.size(); ++i)
    if (scan.points[i].eq_ground > scan.points[i - 1].eq_ground + 1e-8)
      scan.monotonicity_violations.push_back((int)i);
  return scan;
}

std::string path_scan_csv(const PathScan& scan) {
  std::ostringstream os;
  os << "s,e_ground,gap,eq_ground,qgood_flag,moment_flag\n";
  char buf[256];
  for (size_t i = 0; i < scan.points.size(); ++i) {
    const auto& r = scan.points[i];
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%d,%d\n", scan.grid[i], r.e_ground,
                  r.gap, r.eq_ground, r.qgood_flag ? 1 : 0, r.moment_flag ? 1 : 0);
    os << buf;
  }
  return os.str();
}

Eigen::MatrixXd dense_operator(const LinOp& op, size_t dim) {
  if (dim > kDenseCap) throw ResourceError("dense_operator: dimension above dense cap 4096");
  Eigen::MatrixXd a(dim, dim);
  std::vector<double> in(dim, 0.0), col(dim);
  for (size_t j = 0; j < dim; ++j) {
    in.assign(dim, 0.0);
    in[j] = 1.0;
    op(in, col);
    for (size_t i = 0; i < dim; ++i) a(i, j) = col[i];
  }
  return a;
}

Eigen::MatrixXd dense_hs_matrix(const Instance& inst, const HsParams& p, Mode mode) {
  HsOperator h(inst, p, mode);
  return dense_operator(h.as_linop(), h.dim());
}

}  // namespace sp

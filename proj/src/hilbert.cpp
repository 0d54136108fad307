#include "shortpath/hilbert.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "json.hpp"

namespace sp {

const char* mode_name(Mode m) { return m == Mode::full ? "full" : "even"; }

Mode mode_for(const Instance& inst, const std::string& requested) {
  if (requested == "full") return Mode::full;
  if (requested == "even") {
    if (inst.d() % 2 != 0)
      throw InputError("even mode requires even degree d (prod_i X_i does not commute otherwise)");
    return Mode::even;
  }
  if (requested == "auto") return inst.d() % 2 == 0 ? Mode::even : Mode::full;
  throw InputError("unknown mode '" + requested + "' (expected full|even|auto)");
}

HsParams::HsParams(double s_, double b_, int k_) : s(s_), big_b(b_), k(k_) {
  if (k < 1 || k % 2 == 0) throw InputError("HsParams: K must be a positive odd integer");
  if (big_b < 0) throw InputError("HsParams: B must be >= 0");
  if (s < 0.0 || s > 1.0) throw InputError("HsParams: s must be in [0,1]");
}

int HsParams::k_from_c(int n, double c) {
  const double target = c * std::log2((double)std::max(2, n));
  int k = (int)std::ceil(target);
  if (k % 2 == 0) ++k;
  return std::max(3, k);
}

StateVector zero_state(int n, Mode m) {
  StateVector v;
  v.mode = m;
  v.n = n;
  v.a.assign(StateVector::dim_for(m, n), 0.0);
  return v;
}

StateVector basis_state(int n, Mode m, uint64_t index) {
  StateVector v = zero_state(n, m);
  if (index >= v.dim()) throw InputError("basis_state: index out of range");
  v.a[index] = 1.0;
  return v;
}

StateVector plus_state(int n, Mode m) {
  StateVector v = zero_state(n, m);
  const double amp = std::pow(2.0, -0.5 * (m == Mode::even ? n - 1 : n));
  std::fill(v.a.begin(), v.a.end(), amp);
  return v;
}

double dot(const StateVector& a, const StateVector& b) {
  if (a.mode != b.mode || a.n != b.n) throw InputError("dot: mode/size mismatch");
  double s = 0.0, c = 0.0;
  for (size_t i = 0; i < a.a.size(); ++i) {
    // Kahan accumulation; overlaps feed 1e-9-level assertions downstream.
    double y = a.a[i] * b.a[i] - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

double norm(const StateVector& v) { return std::sqrt(dot(v, v)); }

void check_unit_norm(const StateVector& v, double tol) {
  if (std::fabs(norm(v) - 1.0) > tol)
    throw InputError("state vector is not unit-normalized (|norm-1| > tolerance)");
}

StateVector to_full(const StateVector& v) {
  if (v.mode == Mode::full) return v;
  StateVector f = zero_state(v.n, Mode::full);
  const double inv_sqrt2 = std::sqrt(0.5);
  const uint64_t all = (1ull << v.n) - 1;
  for (uint64_t j = 0; j < v.dim(); ++j) {
    f.a[j] = v.a[j] * inv_sqrt2;
    f.a[j ^ all] = v.a[j] * inv_sqrt2;
  }
  return f;
}

StateVector to_even(const StateVector& v) {
  if (v.mode == Mode::even) return v;
  StateVector e = zero_state(v.n, Mode::even);
  const double sqrt2 = std::sqrt(2.0);
  const uint64_t all = (1ull << v.n) - 1;
  for (uint64_t j = 0; j < e.dim(); ++j) {
    if (std::fabs(v.a[j] - v.a[j ^ all]) > 1e-10 * (1.0 + std::fabs(v.a[j])))
      throw InputError("to_even: vector is not in the even sector");
    e.a[j] = v.a[j] * sqrt2;
  }
  return e;
}

std::vector<double> mode_diagonal(const Instance& inst, Mode m) {
  if (m == Mode::even && inst.d() % 2 != 0)
    throw InputError("even mode requires even degree d");
  const size_t dim = StateVector::dim_for(m, inst.n());
  std::vector<double> diag(dim);
  for (uint64_t u = 0; u < dim; ++u) diag[u] = (double)energy_of(inst, u);
  return diag;
}

StateVector apply_hz(const Instance& inst, const StateVector& v) {
  if (v.n != inst.n()) throw InputError("apply_hz: spin count mismatch");
  if (v.mode == Mode::even && inst.d() % 2 != 0)
    throw InputError("apply_hz: even mode requires even degree d");
  StateVector out = v;
  for (uint64_t u = 0; u < v.dim(); ++u) out.a[u] = v.a[u] * (double)energy_of(inst, u);
  return out;
}

void apply_x_raw(Mode mode, int n, const std::vector<double>& in, std::vector<double>& out) {
  out.assign(in.size(), 0.0);
  if (mode == Mode::full) {
    for (int i = 0; i < n; ++i) {
      const uint64_t bit = 1ull << i;
      for (uint64_t u = 0; u < in.size(); ++u) out[u] += in[u ^ bit];
    }
  } else {
    const uint64_t half = in.size();
    const uint64_t all = (1ull << n) - 1;
    for (int i = 0; i < n; ++i) {
      const uint64_t bit = 1ull << i;
      for (uint64_t j = 0; j < half; ++j) {
        uint64_t t = j ^ bit;
        if (t >= half) t ^= all;
        out[j] += in[t];
      }
    }
  }
}

StateVector apply_x(const StateVector& v) {
  StateVector out = zero_state(v.n, v.mode);
  apply_x_raw(v.mode, v.n, v.a, out.a);
  return out;
}

StateVector apply_xn_pow(const StateVector& v, int k) {
  StateVector cur = v;
  StateVector next = zero_state(v.n, v.mode);
  const double inv_n = 1.0 / v.n;
  for (int round = 0; round < k; ++round) {
    apply_x_raw(v.mode, v.n, cur.a, next.a);
    for (auto& x : next.a) x *= inv_n;
    std::swap(cur, next);
  }
  return cur;
}

StateVector apply_hs(const Instance& inst, const HsParams& p, const StateVector& v) {
  StateVector out = apply_hz(inst, v);
  if (p.s != 0.0 && p.big_b != 0.0) {
    StateVector xk = apply_xn_pow(v, p.k);
    const double c = p.s * p.big_b;
    for (size_t i = 0; i < out.a.size(); ++i) out.a[i] -= c * xk.a[i];
  }
  return out;
}

double expect_hz(const Instance& inst, const StateVector& v) { return dot(v, apply_hz(inst, v)); }
double expect_x(const StateVector& v) { return dot(v, apply_x(v)); }
double expect_hs(const Instance& inst, const HsParams& p, const StateVector& v) {
  return dot(v, apply_hs(inst, p, v));
}

void wht(std::vector<double>& a) {
  const size_t n = a.size();
  for (size_t len = 1; len < n; len <<= 1) {
    for (size_t blk = 0; blk < n; blk += len << 1) {
      for (size_t i = blk; i < blk + len; ++i) {
        const double x = a[i], y = a[i + len];
        a[i] = x + y;
        a[i + len] = x - y;
      }
    }
  }
}

std::vector<double> x_spectrum_weights(const StateVector& v) {
  StateVector f = to_full(v);
  wht(f.a);
  const double scale = std::pow(2.0, -(double)v.n);  // orthonormal WHT = wht * 2^{-n/2}
  std::vector<double> w(v.n + 1, 0.0);
  for (uint64_t k = 0; k < f.dim(); ++k)
    w[std::popcount(k)] += f.a[k] * f.a[k] * scale;
  return w;
}

StateVector band_project(const StateVector& v, int w, int x) {
  if (w < 1) throw InputError("band_project: band width must be >= 1");
  StateVector f = to_full(v);
  wht(f.a);
  const int n = v.n;
  const int64_t lo = (int64_t)x * w, hi = lo + w;  // [lo, hi)
  for (uint64_t k = 0; k < f.dim(); ++k) {
    const int64_t xval = n - 2 * std::popcount(k);
    if (xval < lo || xval >= hi) f.a[k] = 0.0;
  }
  wht(f.a);
  const double scale = std::pow(2.0, -(double)n);
  for (auto& y : f.a) y *= scale;
  return v.mode == Mode::full ? f : to_even(f);
}

StateVector apply_xn_pow_spectral(const StateVector& v, int k) {
  StateVector f = to_full(v);
  wht(f.a);
  const int n = v.n;
  for (uint64_t idx = 0; idx < f.dim(); ++idx) {
    const double lambda = (double)(n - 2 * std::popcount(idx)) / n;
    double p = 1.0;
    for (int i = 0; i < k; ++i) p *= lambda;
    f.a[idx] *= p;
  }
  wht(f.a);
  const double scale = std::pow(2.0, -(double)n);
  for (auto& y : f.a) y *= scale;
  return v.mode == Mode::full ? f : to_even(f);
}

double s_comp(const StateVector& v) {
  check_unit_norm(v);
  double s = 0.0;
  for (double amp : v.a) {
    const double p = amp * amp;
    if (p > 0.0) s -= p * std::log2(p);
  }
  if (v.mode == Mode::even) s += 1.0;  // each pair splits into two equal outcomes
  return s;
}

SpinConfig sample_measurement(const StateVector& v, Rng& rng) {
  check_unit_norm(v);
  const double r = rng.uniform();
  double acc = 0.0;
  uint64_t pick = v.dim() - 1;
  for (uint64_t i = 0; i < v.dim(); ++i) {
    acc += v.a[i] * v.a[i];
    if (r < acc) {
      pick = i;
      break;
    }
  }
  SpinConfig u{v.n, pick};
  if (v.mode == Mode::even && rng.uniform() < 0.5) u.bits = u.flipped_all();
  return u;
}

std::string state_to_json(const StateVector& v) {
  nlohmann::ordered_json j;
  j["n"] = v.n;
  j["mode"] = mode_name(v.mode);
  j["amplitudes"] = v.a;
  return j.dump() + "\n";
}

}  // namespace sp

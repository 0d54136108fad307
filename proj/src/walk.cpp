#include "shortpath/walk.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "shortpath/rng.hpp"

namespace sp {

namespace {

constexpr uint64_t kShard = 4096;  // samples per RNG stream; worker-count independent

long double pow_ld(long double base, int e) {
  long double r = 1.0L, b = base;
  for (int x = e; x > 0; x >>= 1) {
    if (x & 1) r *= b;
    b *= b;
  }
  return r;
}

// C(n,k) exact in long double for n <= 64.
long double binom_ld(int n, int k) {
  if (k < 0 || k > n) return 0.0L;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) r = r * (unsigned)(n - k + i) / (unsigned)i;
  return (long double)r;
}

struct KahanLd {
  long double s = 0.0L, c = 0.0L;
  void add(long double x) {
    long double y = x - c;
    long double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

// Incremental walk energy: per-term sign cache updated per spin flip.
struct WalkEnergy {
  const Instance* inst;
  std::vector<std::vector<int>> terms_by_qubit;
  std::vector<int> sign;
  int64_t e = 0;

  explicit WalkEnergy(const Instance& i) : inst(&i), terms_by_qubit(i.n()) {
    for (size_t t = 0; t < i.terms().size(); ++t)
      for (int q : i.terms()[t].qubits) terms_by_qubit[q].push_back((int)t);
  }
  void reset(uint64_t bits) {
    const auto& terms = inst->terms();
    sign.assign(terms.size(), 1);
    e = 0;
    for (size_t t = 0; t < terms.size(); ++t) {
      int s = (__builtin_popcountll(bits & inst->masks()[t]) & 1) ? -1 : 1;
      sign[t] = s;
      e += terms[t].weight * s;
    }
  }
  void flip(int q) {
    for (int t : terms_by_qubit[q]) {
      e -= 2 * inst->terms()[t].weight * sign[t];
      sign[t] = -sign[t];
    }
  }
};

}  // namespace

double x_moment(int n, int l) {
  if (l < 0) throw InputError("x_moment: L must be >= 0");
  if (l == 0) return 1.0;
  if (l % 2 == 1) return 0.0;  // odd moments vanish by parity
  KahanLd acc;
  const long double scale = pow_ld(0.5L, n);
  for (int k = 0; k <= n; ++k) {
    const long double lam = (long double)(n - 2 * k) / (long double)n;
    acc.add(binom_ld(n, k) * scale * pow_ld(lam, l));
  }
  return (double)acc.s;
}

double x_pair_moment(int n, int l) {
  if (l < 0) throw InputError("x_pair_moment: L must be >= 0");
  if (l < n) return 0.0;  // alternating sum annihilates polynomials of degree < n
  KahanLd acc;
  const long double scale = pow_ld(0.5L, n);
  for (int k = 0; k <= n; ++k) {
    const long double lam = (long double)(n - 2 * k) / (long double)n;
    const long double s = (k % 2 == 0) ? 1.0L : -1.0L;
    acc.add(s * binom_ld(n, k) * scale * pow_ld(lam, l));
  }
  return (double)acc.s;
}

double x_moment_mode(int n, int l, Mode mode) {
  double m = x_moment(n, l);
  if (mode == Mode::even) m += x_pair_moment(n, l);
  return m;
}

MomentTable build_moment_table(int n, int l_max) {
  MomentTable t;
  t.n = n;
  t.m.reserve(l_max + 1);
  for (int l = 0; l <= l_max; ++l) t.m.push_back(x_moment(n, l));
  return t;
}

ReturnStats return_probabilities(int n, int k, int t_max, uint64_t mc_samples, uint64_t seed) {
  if (k % 2 == 0 || k < 1) throw InputError("return_probabilities: K must be odd");
  ReturnStats rs;
  rs.k = k;
  rs.samples = mc_samples;
  for (int t = 1; t <= t_max; ++t) rs.exact_return.push_back(x_moment(n, k * t));
  double acc = 0.0;
  for (int t = 0; t < t_max; ++t) {
    acc += rs.exact_return[t];
    rs.p_nr_lower.push_back(std::max(0.0, 1.0 - acc));
  }
  if (mc_samples > 0) {
    std::vector<uint64_t> hits(t_max, 0);
    for (uint64_t shard = 0; shard * kShard < mc_samples; ++shard) {
      Rng rng = Rng::stream(seed, shard);
      const uint64_t hi = std::min(mc_samples, (shard + 1) * kShard);
      for (uint64_t s = shard * kShard; s < hi; ++s) {
        uint64_t u = 0;
        for (int t = 0; t < t_max; ++t) {
          for (int f = 0; f < k; ++f) u ^= 1ull << rng.below(n);
          if (u == 0) ++hits[t];
        }
      }
    }
    for (int t = 0; t < t_max; ++t) rs.mc_freq.push_back((double)hits[t] / mc_samples);
  }
  return rs;
}

EnergyDecay mean_energy_decay(const Instance& inst, int k, int t_max, uint64_t samples,
                              uint64_t seed) {
  if (k % 2 == 0 || k < 1) throw InputError("mean_energy_decay: K must be odd");
  const auto gs = ground_configs(inst);
  const uint64_t u0 = gs[0];
  const int64_t e0 = energy_of(inst, u0);
  const int n = inst.n();

  std::vector<double> sum(t_max + 1, 0.0), sumsq(t_max + 1, 0.0);
  WalkEnergy we(inst);
  for (uint64_t shard = 0; shard * kShard < samples; ++shard) {
    Rng rng = Rng::stream(seed, shard);
    const uint64_t hi = std::min(samples, (shard + 1) * kShard);
    for (uint64_t s = shard * kShard; s < hi; ++s) {
      we.reset(u0);
      sum[0] += (double)we.e;
      for (int t = 1; t <= t_max; ++t) {
        for (int f = 0; f < k; ++f) we.flip((int)rng.below(n));
        sum[t] += (double)we.e;
        sumsq[t] += (double)we.e * (double)we.e;
      }
    }
  }

  EnergyDecay d;
  const double base = 1.0 - 2.0 * inst.d() / (double)n;
  bool ok = true;
  for (int t = 0; t <= t_max; ++t) {
    const double mean = sum[t] / samples;
    const double var = std::max(0.0, sumsq[t] / samples - mean * mean);
    const double se = (t == 0) ? 0.0 : std::sqrt(var / samples);
    const double pred = std::pow(base, (double)t * k) * (double)e0;
    d.mean.push_back(mean);
    d.std_error.push_back(se);
    d.predicted.push_back(pred);
    if (t >= 1 && std::fabs(mean - pred) > 3.0 * se + 1e-9) ok = false;
  }
  d.within_3sigma = ok;
  return d;
}

WalkEstimate overlap_lower_bound(const Instance& inst, const HsParams& p, double e01, int t_max,
                                 uint64_t samples, uint64_t seed) {
  if (p.k % 2 == 0) throw InputError("overlap_lower_bound: K must be odd");
  const auto gs = ground_configs(inst);
  const int64_t e0 = energy_of(inst, gs[0]);
  if (!(e01 < (double)e0))
    throw PreconditionError("overlap_lower_bound: e01 must lie strictly below E_0");
  const bool even = inst.d() % 2 == 0;
  const uint64_t u0 = gs[0];
  const uint64_t u0bar = u0 ^ ((1ull << inst.n()) - 1);
  const int n = inst.n();
  const int k = p.k;

  WalkEstimate est;
  est.t_max = t_max;
  est.samples = samples;

  // Exact non-return lower bounds; even mode adds the pair-return channel.
  std::vector<double> ret(t_max + 1, 0.0);
  for (int t = 1; t <= t_max; ++t) {
    ret[t] = x_moment(n, k * t);
    if (even) ret[t] += x_pair_moment(n, k * t);
  }
  est.p_nr.assign(t_max + 1, 1.0);
  double acc = 0.0;
  for (int t = 1; t <= t_max; ++t) {
    acc += ret[t];
    est.p_nr[t] = std::max(0.0, 1.0 - acc);
  }

  std::vector<double> sum(t_max + 1, 0.0), sumsq(t_max + 1, 0.0);
  std::vector<uint64_t> count(t_max + 1, 0);
  count[0] = samples;
  sum[0] = (double)samples;
  sumsq[0] = (double)samples;

  WalkEnergy we(inst);
  for (uint64_t shard = 0; shard * kShard < samples; ++shard) {
    Rng rng = Rng::stream(seed, shard);
    const uint64_t hi = std::min(samples, (shard + 1) * kShard);
    for (uint64_t s = shard * kShard; s < hi; ++s) {
      we.reset(u0);
      uint64_t u = u0;
      double prod = 1.0;
      for (int t = 1; t <= t_max; ++t) {
        for (int f = 0; f < k; ++f) {
          const int q = (int)rng.below(n);
          u ^= 1ull << q;
          we.flip(q);
        }
        const bool returned = (u == u0) || (even && u == u0bar);
        if (returned) break;  // conditioning by rejection
        const double denom = (double)we.e - e01;
        if (denom <= 0.0)
          throw PreconditionError("overlap_lower_bound: non-positive denominator encountered");
        prod /= denom;
        sum[t] += prod;
        sumsq[t] += prod * prod;
        ++count[t];
      }
    }
  }

  double series = 0.0, series_c = 0.0, var_total = 0.0;
  double bpow = 1.0;
  for (int t = 0; t <= t_max; ++t) {
    const double mean = count[t] > 0 ? sum[t] / count[t] : 0.0;
    const double var =
        count[t] > 1 ? std::max(0.0, sumsq[t] / count[t] - mean * mean) / count[t] : 0.0;
    const double se = std::sqrt(var);
    est.order_mean.push_back(mean);
    est.order_stderr.push_back(se);
    const double term = bpow * mean * est.p_nr[t];
    const double y = term - series_c;
    const double tt = series + y;
    series_c = (tt - series) - y;
    series = tt;
    var_total += bpow * est.p_nr[t] * se * bpow * est.p_nr[t] * se;
    est.partial_sum.push_back(series);
    bpow *= p.big_b;
  }
  est.estimate = series;
  est.total_stderr = std::sqrt(var_total);
  return est;
}

std::string walk_csv(const ReturnStats& rs, const WalkEstimate* est) {
  std::ostringstream os;
  os << "t,exact_return_prob,mc_return_freq,partial_sum,stderr\n";
  char buf[256];
  const size_t rows = std::max(rs.exact_return.size() + 1,
                               est ? est->partial_sum.size() : (size_t)0);
  for (size_t t = 0; t < rows; ++t) {
    const double exact = (t >= 1 && t <= rs.exact_return.size()) ? rs.exact_return[t - 1] : 0.0;
    const double freq = (t >= 1 && t <= rs.mc_freq.size()) ? rs.mc_freq[t - 1] : 0.0;
    const double ps = (est && t < est->partial_sum.size()) ? est->partial_sum[t] : 0.0;
    const double se = (est && t < est->order_stderr.size()) ? est->order_stderr[t] : 0.0;
    std::snprintf(buf, sizeof(buf), "%zu,%.12g,%.12g,%.12g,%.12g\n", t, exact, freq, ps, se);
    os << buf;
  }
  return os.str();
}

}  // namespace sp

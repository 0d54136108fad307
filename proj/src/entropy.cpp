#include "shortpath/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shortpath/walk.hpp"

namespace sp {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0) throw InputError("binary_entropy: argument outside [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double inv_binary_entropy(double sigma) {
  if (sigma < 0.0 || sigma > 1.0) throw InputError("inv_binary_entropy: argument outside [0,1]");
  if (sigma == 0.0) return 0.0;
  if (sigma == 1.0) return 0.5;
  // Relative convergence: tau = 2 sqrt(x(1-x)) amplifies absolute error near
  // x = 0, so the bracket must shrink relative to x itself.
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 2000 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (binary_entropy(mid) < sigma ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double tau(double sigma) {
  if (sigma == 0.0) return 0.0;
  if (sigma == 1.0) return 1.0;
  const double x = inv_binary_entropy(sigma);
  return 2.0 * std::sqrt(x * (1.0 - x));
}

double tau_inv(double m) {
  if (m < 0.0 || m > 1.0) throw InputError("tau_inv: argument outside [0,1]");
  if (m == 0.0) return 0.0;
  if (m == 1.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (tau(mid) < m ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

LsiCheck check_lsi(const StateVector& v) {
  check_unit_norm(v);
  LsiCheck c;
  c.s_comp = s_comp(v);
  c.x_expect = expect_x(v);
  const double n = (double)v.n;
  c.lsi1_slack = c.s_comp - ((1.0 - 1.0 / kLn2) * n + c.x_expect / kLn2);
  const double sigma = std::clamp(c.s_comp / n, 0.0, 1.0);
  c.lsi2_slack = tau(sigma) - c.x_expect / n;
  c.lsi1_ok = c.lsi1_slack >= -1e-9;
  c.lsi2_ok = c.lsi2_slack >= -1e-9;
  return c;
}

TwoPointDecomposition maxwell_decompose(const EnergyHistogram& hist,
                                        const std::map<int64_t, double>& p_of_e,
                                        const std::map<int64_t, double>& s_of_e) {
  double total = 0.0, mean = 0.0;
  for (const auto& [e, pe] : p_of_e) {
    if (pe < -1e-12) throw InputError("maxwell_decompose: negative probability");
    if (pe <= 0.0) continue;
    auto it = hist.counts.find(e);
    if (it == hist.counts.end() || it->second == 0)
      throw InputError("maxwell_decompose: probability on energy with W(E)=0");
    total += pe;
    mean += pe * (double)e;
  }
  if (std::fabs(total - 1.0) > 1e-9)
    throw InputError("maxwell_decompose: probabilities do not sum to 1");
  for (const auto& [e, se] : s_of_e) {
    auto it = hist.counts.find(e);
    const double cap = (it == hist.counts.end()) ? 0.0 : std::log2((double)it->second);
    if (se < -1e-9 || se > cap + 1e-9)
      throw InputError("maxwell_decompose: conditional entropy outside [0, log2 W(E)]");
  }
  const int64_t emin = hist.counts.begin()->first;
  const int64_t emax = hist.counts.rbegin()->first;
  if (mean < (double)emin - 1e-9 || mean > (double)emax + 1e-9)
    throw InputError("maxwell_decompose: mean energy infeasible for this histogram");

  std::vector<std::pair<int64_t, double>> logw;  // (E, log2 W(E))
  for (const auto& [e, w] : hist.counts) logw.emplace_back(e, std::log2((double)w));

  TwoPointDecomposition best;
  best.mean = mean;
  double best_val = -1.0;
  for (size_t i = 0; i < logw.size(); ++i) {
    const auto [e1, l1] = logw[i];
    if (std::fabs((double)e1 - mean) <= 1e-9 && l1 > best_val) {
      best_val = l1;
      best = {e1, e1, 1.0, l1, mean};
    }
    for (size_t j = i + 1; j < logw.size(); ++j) {
      const auto [e2, l2] = logw[j];
      if (!((double)e1 <= mean + 1e-9 && mean <= (double)e2 + 1e-9)) continue;
      const double pw = ((double)e2 - mean) / (double)(e2 - e1);
      if (pw < -1e-12 || pw > 1.0 + 1e-12) continue;
      const double val = pw * l1 + (1.0 - pw) * l2;
      if (val > best_val) {
        best_val = val;
        best = {e1, e2, std::clamp(pw, 0.0, 1.0), val, mean};
      }
    }
  }
  if (best_val < 0.0) throw InputError("maxwell_decompose: no feasible support pair");
  return best;
}

EnergyDistribution energy_distribution(const Instance& inst, const StateVector& v) {
  check_unit_norm(v);
  EnergyDistribution d;
  std::map<int64_t, double> h_of_e;  // -sum_u p_u log2 p_u per energy
  const bool even = v.mode == Mode::even;
  for (uint64_t u = 0; u < v.dim(); ++u) {
    const double pu_total = v.a[u] * v.a[u];
    if (pu_total <= 0.0) continue;
    const int64_t e = energy_of(inst, u);
    // Even mode: the pair splits into two equal underlying outcomes.
    const double q = even ? pu_total / 2.0 : pu_total;
    const int copies = even ? 2 : 1;
    d.p_of_e[e] += pu_total;
    h_of_e[e] += copies * (-q * std::log2(q));
  }
  for (auto& [e, pe] : d.p_of_e) {
    d.mean += pe * (double)e;
    d.marginal_entropy -= pe * std::log2(pe);
    d.s_of_e[e] = h_of_e[e] / pe + std::log2(pe);
  }
  return d;
}

EntropyCertificate qbad_certificate(const Instance& inst, const HsParams& p,
                                    const StateVector& xi, double eta) {
  check_unit_norm(xi);
  EntropyCertificate c;
  c.eta = eta;
  const int n = inst.n();
  c.s_comp = s_comp(xi);
  c.x_expect = expect_x(xi);
  c.e_bar = expect_hz(inst, xi);

  const auto cfgs = ground_configs(inst);
  const int64_t e0 = energy_of(inst, cfgs[0]);

  c.x_min = p.big_b > 0.0 ? n * std::pow(4.0 * p.big_b, -1.0 / p.k)
                          : std::numeric_limits<double>::infinity();

  // Window center from the X-support of xi (amplitude threshold 1e-12).
  const auto weights = x_spectrum_weights(xi);
  double xlo = 0.0, xhi = 0.0;
  bool found = false;
  for (int k = 0; k <= n; ++k) {
    if (weights[k] <= 1e-24) continue;
    const double xv = (double)(n - 2 * k);
    if (!found) {
      xlo = xhi = xv;
      found = true;
    } else {
      xlo = std::min(xlo, xv);
      xhi = std::max(xhi, xv);
    }
  }
  c.x0 = found ? 0.5 * (xlo + xhi) : 0.0;

  const double arg = std::clamp((c.x0 - c.x_min / p.k) / n, 0.0, 1.0);
  c.entropy_bound = n * tau_inv(arg);
  c.vacuous = c.entropy_bound <= 1e-12 || !std::isfinite(c.x_min);
  c.bound_satisfied = c.s_comp >= c.entropy_bound - 1e-9;

  // Unit-constant diagnostics (hidden O(1) factors set to 1, never asserted).
  const double jt = (double)inst.j_tot();
  const double kd = (double)p.k * inst.d();
  if (std::isfinite(c.x_min) && c.x_min > 0.0)
    c.f_of_s = (double)e0 + jt * kd * kd / (c.x_min * c.x_min) +
               p.big_b * std::pow(tau(std::clamp(c.s_comp / n, 0.0, 1.0)), (double)p.k);
  const double b_frac = std::fabs((double)e0) > 0 ? p.big_b / std::fabs((double)e0) : 0.0;
  c.e_split_threshold =
      (double)e0 + (1.0 + eta) * (b_frac * std::fabs((double)e0) + jt * kd * kd / ((double)n * n));

  const auto hist = histogram(inst);
  const auto dist = energy_distribution(inst, xi);
  c.decomposition = maxwell_decompose(hist, dist.p_of_e, dist.s_of_e);
  c.marginal_entropy = dist.marginal_entropy;
  c.marginal_entropy_cap = std::log2(2.0 * (double)inst.j_tot() + 1.0);
  return c;
}

}  // namespace sp

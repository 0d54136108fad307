#include "shortpath/instance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

#include "shortpath/rng.hpp"
#include "json.hpp"

namespace sp {

namespace {

uint64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (unsigned)(n - k + i) / (unsigned)i;
    if (r > (unsigned __int128)UINT64_MAX) return UINT64_MAX;  // saturate
  }
  return (uint64_t)r;
}

int sign_of(uint64_t bits, uint64_t mask) {
  return (std::popcount(bits & mask) & 1) ? -1 : 1;
}

}  // namespace

std::string SpinConfig::to_string() const {
  std::string s(n, '0');
  for (int i = 0; i < n; ++i)
    if ((bits >> i) & 1) s[i] = '1';
  return s;
}

std::vector<std::string> validate(int n, int d, const std::vector<CostTerm>& terms) {
  std::vector<std::string> out;
  if (d < 1) out.push_back("degree d must be >= 1");
  if (n < d) out.push_back("spin count n must be >= d");
  if (n > 63) out.push_back("spin count n must be <= 63");
  if (terms.empty()) out.push_back("instance must have at least one term");
  std::set<std::vector<int>> seen;
  for (size_t t = 0; t < terms.size(); ++t) {
    const auto& term = terms[t];
    std::ostringstream tag;
    tag << "term " << t << ": ";
    if ((int)term.qubits.size() != d) out.push_back(tag.str() + "must have exactly d qubits");
    if (!std::is_sorted(term.qubits.begin(), term.qubits.end()))
      out.push_back(tag.str() + "qubits not sorted ascending");
    std::set<int> uniq(term.qubits.begin(), term.qubits.end());
    if (uniq.size() != term.qubits.size()) out.push_back(tag.str() + "indices not distinct");
    for (int q : term.qubits)
      if (q < 0 || q >= n) out.push_back(tag.str() + "qubit index out of range");
    if (term.weight == 0) out.push_back(tag.str() + "weight must be nonzero");
    if (!seen.insert(term.qubits).second) out.push_back(tag.str() + "duplicate term");
  }
  return out;
}

Instance::Instance(int n, int d, std::vector<CostTerm> terms)
    : n_(n), d_(d), terms_(std::move(terms)) {
  auto violations = validate(n_, d_, terms_);
  if (!violations.empty()) {
    std::string msg = "invalid instance:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw InputError(msg);
  }
  std::sort(terms_.begin(), terms_.end(),
            [](const CostTerm& a, const CostTerm& b) { return a.qubits < b.qubits; });
  masks_.reserve(terms_.size());
  j_tot_ = 0;
  for (const auto& t : terms_) {
    uint64_t m = 0;
    for (int q : t.qubits) m |= (1ull << q);
    masks_.push_back(m);
    j_tot_ += std::llabs(t.weight);
  }
}

double Instance::beta() const {
  if (n_ <= 1 || j_tot_ <= 1) return 0.0;
  return std::log((double)j_tot_) / std::log((double)n_);
}

int64_t energy_of(const Instance& inst, uint64_t bits) {
  int64_t e = 0;
  const auto& masks = inst.masks();
  const auto& terms = inst.terms();
  for (size_t t = 0; t < masks.size(); ++t) e += terms[t].weight * sign_of(bits, masks[t]);
  return e;
}

int64_t energy_of(const Instance& inst, const SpinConfig& u) {
  if (u.n != inst.n())
    throw InputError("energy_of: configuration has " + std::to_string(u.n) + " spins, instance has " +
                     std::to_string(inst.n()));
  return energy_of(inst, u.bits);
}

int64_t energy_with_fields(const Instance& inst, const std::vector<int>& h, uint64_t bits) {
  int64_t e = energy_of(inst, bits);
  for (size_t i = 0; i < h.size(); ++i)
    if (h[i] != 0) e += h[i] * (((bits >> i) & 1) ? -1 : 1);
  return e;
}

int exhaustive_cap() {
  if (const char* env = std::getenv("SHORTPATH_CAP_N")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 28;
}

namespace {

// Gray-code sweep over all 2^n configurations; `visit(bits, energy)` is called
// once per configuration.  Incremental term-sign updates keep the cost at
// O(2^n * d * m / n) instead of O(2^n * m).
template <typename F>
void gray_scan(const Instance& inst, const std::vector<int>& fields, F&& visit) {
  const int n = inst.n();
  const auto& terms = inst.terms();
  std::vector<std::vector<int>> terms_by_qubit(n);
  for (size_t t = 0; t < terms.size(); ++t)
    for (int q : terms[t].qubits) terms_by_qubit[q].push_back((int)t);

  std::vector<int> sign(terms.size(), 1);
  int64_t e = 0;
  for (const auto& t : terms) e += t.weight;
  for (size_t i = 0; i < fields.size(); ++i) e += fields[i];

  uint64_t bits = 0;
  visit(bits, e);
  const uint64_t total = 1ull << n;
  for (uint64_t k = 1; k < total; ++k) {
    const int i = std::countr_zero(k);
    for (int t : terms_by_qubit[i]) {
      e -= 2 * terms[t].weight * sign[t];
      sign[t] = -sign[t];
    }
    if (i < (int)fields.size() && fields[i] != 0) {
      // flipping spin i toggles its field contribution
      const int zi_new = ((bits >> i) & 1) ? 1 : -1;  // value after flip
      e += 2 * fields[i] * zi_new;
    }
    bits ^= (1ull << i);
    visit(bits, e);
  }
}

EnergyHistogram histogram_impl(const Instance& inst, const std::vector<int>& fields,
                               std::optional<int> cap) {
  const int limit = cap.value_or(exhaustive_cap());
  if (inst.n() > limit)
    throw ResourceError("histogram: n=" + std::to_string(inst.n()) +
                        " above exhaustive-enumeration cap " + std::to_string(limit));
  EnergyHistogram h;
  gray_scan(inst, fields, [&](uint64_t, int64_t e) { ++h.counts[e]; });
  h.e0 = h.counts.begin()->first;
  h.n_gs = h.counts.begin()->second;
  return h;
}

}  // namespace

EnergyHistogram histogram(const Instance& inst, std::optional<int> cap) {
  return histogram_impl(inst, {}, cap);
}

namespace {

std::vector<uint64_t> ground_configs_impl(const Instance& inst, const std::vector<int>& fields,
                                          std::optional<int> cap) {
  const int limit = cap.value_or(exhaustive_cap());
  if (inst.n() > limit)
    throw ResourceError("ground_configs: n above exhaustive-enumeration cap");
  std::vector<uint64_t> best;
  int64_t e0 = INT64_MAX;
  gray_scan(inst, fields, [&](uint64_t bits, int64_t e) {
    if (e < e0) {
      e0 = e;
      best.clear();
    }
    if (e == e0) best.push_back(bits);
  });
  std::sort(best.begin(), best.end());
  return best;
}

}  // namespace

std::vector<uint64_t> ground_configs(const Instance& inst, std::optional<int> cap) {
  return ground_configs_impl(inst, {}, cap);
}

std::vector<uint64_t> ground_configs_with_fields(const Instance& inst, const std::vector<int>& h,
                                                 std::optional<int> cap) {
  return ground_configs_impl(inst, h, cap);
}

EnergyHistogram histogram_with_fields(const Instance& inst, const std::vector<int>& h,
                                      std::optional<int> cap) {
  return histogram_impl(inst, h, cap);
}

Instance random_instance(int n, int d, int m, const std::vector<int64_t>& weight_set,
                         uint64_t seed) {
  if (weight_set.empty()) throw InputError("random_instance: empty weight set");
  for (int64_t w : weight_set)
    if (w == 0) throw InputError("random_instance: weight set contains zero");
  if (d < 1 || n < d) throw InputError("random_instance: need n >= d >= 1");
  const uint64_t total = binom(n, d);
  if (m < 1 || (uint64_t)m > total)
    throw InputError("random_instance: term count m must be in [1, C(n,d)]");

  Rng rng(seed);
  std::set<std::vector<int>> sets;
  if ((uint64_t)m * 2 >= total) {
    // Dense regime: enumerate all d-subsets, Fisher-Yates shuffle, take m.
    std::vector<std::vector<int>> all;
    std::vector<int> comb(d);
    for (int i = 0; i < d; ++i) comb[i] = i;
    for (;;) {
      all.push_back(comb);
      int i = d - 1;
      while (i >= 0 && comb[i] == n - d + i) --i;
      if (i < 0) break;
      ++comb[i];
      for (int j = i + 1; j < d; ++j) comb[j] = comb[j - 1] + 1;
    }
    for (size_t i = all.size() - 1; i > 0; --i)
      std::swap(all[i], all[rng.below(i + 1)]);
    for (int i = 0; i < m; ++i) sets.insert(all[i]);
  } else {
    while ((int)sets.size() < m) {
      std::vector<int> pick;
      std::set<int> used;
      while ((int)pick.size() < d) {
        int q = (int)rng.below(n);
        if (used.insert(q).second) pick.push_back(q);
      }
      std::sort(pick.begin(), pick.end());
      sets.insert(pick);
    }
  }

  std::vector<CostTerm> terms;
  terms.reserve(m);
  for (const auto& q : sets)
    terms.push_back({q, weight_set[rng.below(weight_set.size())]});
  return Instance(n, d, std::move(terms));
}

Instance lift_to_uniform_degree(const Instance& inst, const std::vector<int>& h) {
  if ((int)h.size() != inst.n())
    throw InputError("lift_to_uniform_degree: field vector must have length n");
  for (int v : h)
    if (v < -1 || v > 1) throw InputError("lift_to_uniform_degree: fields must be in {-1,0,+1}");
  const int n = inst.n(), d = inst.d();
  std::vector<CostTerm> terms = inst.terms();

  // J: every degree-d monomial on the d+1 ancillas n..n+d, weight -1.
  std::vector<int> anc(d + 1);
  for (int i = 0; i <= d; ++i) anc[i] = n + i;
  for (int skip = 0; skip <= d; ++skip) {
    CostTerm t;
    for (int i = 0; i <= d; ++i)
      if (i != skip) t.qubits.push_back(anc[i]);
    t.weight = -1;
    terms.push_back(std::move(t));
  }

  // Field couplings h_i Z_i Z_n .. Z_{n+d-2}.
  for (int i = 0; i < n; ++i) {
    if (h[i] == 0) continue;
    CostTerm t;
    t.qubits.push_back(i);
    for (int a = 0; a < d - 1; ++a) t.qubits.push_back(n + a);
    std::sort(t.qubits.begin(), t.qubits.end());
    t.weight = h[i];
    terms.push_back(std::move(t));
  }
  return Instance(n + d + 1, d, std::move(terms));
}

Instance from_max2lin2(int n, const std::vector<std::pair<std::pair<int, int>, int64_t>>& pairs,
                       const std::vector<int64_t>& fields) {
  if ((int)fields.size() != n) throw InputError("from_max2lin2: field vector must have length n");
  std::vector<CostTerm> terms;
  for (const auto& [ij, w] : pairs) {
    if (w == 0) continue;
    int a = ij.first + 1, b = ij.second + 1;
    if (a > b) std::swap(a, b);
    terms.push_back({{a, b}, w});
  }
  for (int i = 0; i < n; ++i)
    if (fields[i] != 0) terms.push_back({{0, i + 1}, fields[i]});
  return Instance(n + 1, 2, std::move(terms));
}

std::string to_json(const Instance& inst) {
  nlohmann::ordered_json j;
  j["n"] = inst.n();
  j["d"] = inst.d();
  j["terms"] = nlohmann::ordered_json::array();
  for (const auto& t : inst.terms()) {
    nlohmann::ordered_json jt;
    jt["qubits"] = t.qubits;
    jt["weight"] = t.weight;
    j["terms"].push_back(jt);
  }
  return j.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("instance file is not valid JSON: ") + e.what());
  }
  try {
    int n = j.at("n").get<int>();
    int d = j.at("d").get<int>();
    std::vector<CostTerm> terms;
    for (const auto& jt : j.at("terms")) {
      CostTerm t;
      t.qubits = jt.at("qubits").get<std::vector<int>>();
      t.weight = jt.at("weight").get<int64_t>();
      terms.push_back(std::move(t));
    }
    return Instance(n, d, std::move(terms));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("instance file missing required field: ") + e.what());
  }
}

}  // namespace sp

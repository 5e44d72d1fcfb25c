#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ooebp/core.hpp"

namespace ooebp {

/// Scheme parameters. Derived values follow eps unless overridden, which is
/// meant for exercising the pipeline at small scale.
struct scheme_params {
  rational eps{1, 3};
  std::optional<int> intervals;             // default 1/eps
  std::optional<int> groups;                // default 1/eps^3
  std::optional<rational> small_threshold;  // default eps^2
  std::optional<rational> small_quantum;    // default eps^3
  std::size_t config_cap = 5'000'000;

  void validate() const {
    if (eps.num() != 1 || eps.den() < 3) throw std::invalid_argument("eps must be 1/m with integer m >= 3");
    if (interval_count() < 1 || group_count() < 1) throw std::invalid_argument("interval and group counts must be positive");
    if (threshold() <= rational(0) || threshold() > rational(1)) throw std::invalid_argument("small threshold must be in (0,1]");
    if (quantum() <= rational(0) || quantum() >= rational(1)) throw std::invalid_argument("small quantum must be in (0,1)");
    if (quantum().num() != 1) throw std::invalid_argument("small quantum must be a unit fraction");
  }
  [[nodiscard]] int interval_count() const { return intervals.value_or(static_cast<int>(eps.den())); }
  [[nodiscard]] int group_count() const {
    return groups.value_or(static_cast<int>(eps.den() * eps.den() * eps.den()));
  }
  [[nodiscard]] rational threshold() const { return small_threshold.value_or(eps * eps); }
  [[nodiscard]] rational quantum() const { return small_quantum.value_or(eps * eps * eps); }
  /// Small items one interval bin may hold.
  [[nodiscard]] std::int64_t items_per_interval_bin() const { return (rational(1) / threshold()).floor(); }
};

/// Thrown when the configuration set would exceed its cap.
class configuration_cap_exceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class infeasible_model : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// 0 = e_0 < e_1 <= ... <= e_K = n. Interval i holds 0-based indices
/// [e_i, e_{i+1}).
using certificate = std::vector<std::size_t>;

inline std::string certificate_str(const certificate& c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s + ")";
}

/// Calls f for every certificate in lexicographic order.
inline void for_each_certificate(std::size_t n, const scheme_params& params, const std::function<void(const certificate&)>& f) {
  if (n < 1) throw std::invalid_argument("certificates need at least one item");
  const int K = params.interval_count();
  certificate e(static_cast<std::size_t>(K) + 1, n);
  e[0] = 0;
  if (K == 1) {
    f(e);
    return;
  }
  // positions 1..K-1 vary; e_1 >= 1
  std::function<void(int, std::size_t)> rec = [&](int pos, std::size_t lo) {
    if (pos == K) {
      f(e);
      return;
    }
    for (std::size_t v = lo; v <= n; ++v) {
      e[pos] = v;
      rec(pos + 1, v);
    }
  };
  rec(1, 1);
}

inline std::vector<certificate> enumerate_certificates(std::size_t n, const scheme_params& params) {
  std::vector<certificate> out;
  for_each_certificate(n, params, [&](const certificate& c) { out.push_back(c); });
  return out;
}

struct padded_instance {
  instance inst;
  std::vector<bool> dummy;
  std::vector<std::int64_t> original;  // original index, -1 for dummies
  certificate cert;                    // boundaries in the padded instance
  std::size_t dummies = 0;
};

/// Inserts size-1 dummies just before the last item of every interval whose
/// large-item count is not a multiple of the group count.
inline padded_instance pad_with_dummies(const instance& inst, const certificate& cert, const scheme_params& params) {
  const int K = params.interval_count();
  const auto G = static_cast<std::size_t>(params.group_count());
  if (cert.size() != static_cast<std::size_t>(K) + 1 || cert.front() != 0 || cert.back() != inst.size()) {
    throw std::invalid_argument("certificate does not match the instance");
  }
  padded_instance out;
  out.cert.push_back(0);
  const rational thr = params.threshold();
  for (int i = 0; i < K; ++i) {
    const std::size_t lo = cert[i], hi = cert[i + 1];
    if (hi < lo || (i == 0 && hi == 0)) throw std::invalid_argument("certificate is not monotone");
    std::size_t large = 0;
    for (std::size_t j = lo; j < hi; ++j) large += inst[j] >= thr ? 1 : 0;
    const std::size_t add = (large % G == 0) ? 0 : G - large % G;
    for (std::size_t j = lo; j < hi; ++j) {
      if (j + 1 == hi) {
        for (std::size_t d = 0; d < add; ++d) {
          out.inst.push_back(rational(1));
          out.dummy.push_back(true);
          out.original.push_back(-1);
        }
      }
      out.inst.push_back(inst[j]);
      out.dummy.push_back(false);
      out.original.push_back(static_cast<std::int64_t>(j));
    }
    out.dummies += add;
    out.cert.push_back(out.inst.size());
  }
  return out;
}

struct grouped_interval {
  int index = 0;
  std::size_t begin = 0, end = 0;  // padded indices [begin, end)
  std::size_t n_large = 0;
  std::vector<std::vector<item_index>> groups;  // non-increasing size order
  std::vector<rational> rounded;                // per group: its largest size
  std::vector<item_index> small;                // index order
  rational sigma;
};

inline std::vector<grouped_interval> linear_grouping(const padded_instance& padded, const scheme_params& params) {
  const int K = params.interval_count();
  const auto G = static_cast<std::size_t>(params.group_count());
  const rational thr = params.threshold();
  std::vector<grouped_interval> out;
  for (int i = 0; i < K; ++i) {
    grouped_interval gi;
    gi.index = i;
    gi.begin = padded.cert[i];
    gi.end = padded.cert[i + 1];
    std::vector<item_index> large;
    for (std::size_t j = gi.begin; j < gi.end; ++j) {
      const auto idx = static_cast<item_index>(j);
      if (padded.inst[j] >= thr) {
        large.push_back(idx);
      } else {
        gi.small.push_back(idx);
        gi.sigma += padded.inst[j];
      }
    }
    std::stable_sort(large.begin(), large.end(), [&](item_index a, item_index b) { return padded.inst[a] > padded.inst[b]; });
    gi.n_large = large.size();
    if (large.size() % G != 0) throw std::logic_error("large count of interval " + std::to_string(i) + " not padded");
    if (!large.empty()) {
      const std::size_t per = large.size() / G;
      for (std::size_t k = 0; k < G; ++k) {
        gi.groups.emplace_back(large.begin() + static_cast<std::ptrdiff_t>(k * per),
                               large.begin() + static_cast<std::ptrdiff_t>((k + 1) * per));
        gi.rounded.push_back(padded.inst[gi.groups.back().front()]);
      }
    }
    out.push_back(std::move(gi));
  }
  return out;
}

/// Instance with large items rounded up to their group size.
inline instance rounded_instance(const padded_instance& padded, const std::vector<grouped_interval>& grouped) {
  std::vector<rational> sizes(padded.inst.begin(), padded.inst.end());
  for (const auto& gi : grouped) {
    for (std::size_t k = 0; k < gi.groups.size(); ++k) {
      for (item_index it : gi.groups[k]) sizes[it] = gi.rounded[k];
    }
  }
  return instance(sizes);
}

/// The rounded instance without the first (largest) group of each interval.
inline instance reduced_instance(const padded_instance& padded, const std::vector<grouped_interval>& grouped) {
  const instance up = rounded_instance(padded, grouped);
  std::vector<bool> drop(up.size(), false);
  for (const auto& gi : grouped) {
    if (!gi.groups.empty()) {
      for (item_index it : gi.groups[0]) drop[it] = true;
    }
  }
  instance out;
  for (std::size_t j = 0; j < up.size(); ++j) {
    if (!drop[j]) out.push_back(up[j]);
  }
  return out;
}

/// One component per non-empty group.
struct ip_component {
  int interval = 0;
  int group = 0;
  rational size;
  std::int64_t demand = 0;
};

struct configuration {
  std::vector<std::int64_t> large;  // per component
  std::vector<std::int64_t> small;  // per interval, in quanta

  friend bool operator==(const configuration&, const configuration&) = default;
  friend auto operator<=>(const configuration&, const configuration&) = default;
};

struct conf_model {
  std::vector<ip_component> components;
  std::vector<std::int64_t> cover;  // per interval: ceil(sigma_i / quantum)
  std::vector<configuration> configs;
  rational quantum;
  int intervals = 0;
};

inline std::vector<ip_component> model_components(const std::vector<grouped_interval>& grouped) {
  std::vector<ip_component> comps;
  for (const auto& gi : grouped) {
    for (std::size_t k = 0; k < gi.groups.size(); ++k) {
      comps.push_back({gi.index, static_cast<int>(k), gi.rounded[k], static_cast<std::int64_t>(gi.groups[k].size())});
    }
  }
  return comps;
}

/// Checks the two feasibility rules for one configuration.
inline bool configuration_feasible(const configuration& c, const std::vector<ip_component>& comps, const rational& quantum,
                                   int intervals) {
  std::vector<rational> per_interval(static_cast<std::size_t>(intervals));
  std::vector<std::int64_t> count(static_cast<std::size_t>(intervals), 0);
  for (std::size_t j = 0; j < comps.size(); ++j) {
    if (c.large[j] == 0) continue;
    per_interval[comps[j].interval] += comps[j].size * rational(c.large[j]);
    count[comps[j].interval] += c.large[j];
  }
  for (int i = 0; i < intervals; ++i) per_interval[i] += quantum * rational(c.small[i]);
  rational total;
  for (const auto& v : per_interval) total += v;
  if (total < rational(1)) return true;
  // A unique item in intervals >= i_max, no small volume there, the rest below 1.
  std::int64_t tail_count = 0;
  rational head = total;
  bool tail_small = false;
  for (int i_max = intervals - 1; i_max >= 0; --i_max) {
    tail_count += count[i_max];
    tail_small = tail_small || c.small[i_max] != 0;
    head -= per_interval[i_max];
    if (tail_count > 1 || tail_small) return false;
    if (tail_count == 1 && head < rational(1)) return true;
  }
  return false;
}

/// All feasible configurations with component counts bounded by demands and
/// small counts bounded by the interval's cover requirement.
inline std::vector<configuration> enumerate_configurations(const std::vector<ip_component>& comps,
                                                           const std::vector<std::int64_t>& cover, const rational& quantum,
                                                           int intervals, std::size_t cap = 5'000'000) {
  std::vector<configuration> out;
  configuration cur;
  cur.large.assign(comps.size(), 0);
  cur.small.assign(static_cast<std::size_t>(intervals), 0);
  const std::int64_t max_quanta = (rational(1) / quantum).floor();
  std::function<void(std::size_t, const rational&)> rec = [&](std::size_t pos, const rational& partial) {
    if (pos == comps.size() + static_cast<std::size_t>(intervals)) {
      if (configuration_feasible(cur, comps, quantum, intervals)) {
        if (out.size() >= cap) {
          throw configuration_cap_exceeded("configuration count exceeds the cap of " + std::to_string(cap));
        }
        out.push_back(cur);
      }
      return;
    }
    if (pos < comps.size()) {
      const auto& comp = comps[pos];
      rational load = partial;
      for (std::int64_t c = 0; c <= comp.demand; ++c) {
        if (c > 0) load += comp.size;
        if (load >= rational(2)) break;
        cur.large[pos] = c;
        rec(pos + 1, load);
      }
      cur.large[pos] = 0;
    } else {
      const std::size_t i = pos - comps.size();
      const std::int64_t hi = std::min(cover[i], max_quanta);
      rational load = partial;
      for (std::int64_t c = 0; c <= hi; ++c) {
        if (c > 0) load += quantum;
        if (load >= rational(2)) break;
        cur.small[i] = c;
        rec(pos + 1, load);
      }
      cur.small[i] = 0;
    }
  };
  rec(0, rational(0));
  return out;
}

inline conf_model build_model(const std::vector<grouped_interval>& grouped, const scheme_params& params) {
  conf_model m;
  m.intervals = params.interval_count();
  m.quantum = params.quantum();
  m.components = model_components(grouped);
  for (const auto& gi : grouped) m.cover.push_back((gi.sigma / m.quantum).ceil());
  m.configs = enumerate_configurations(m.components, m.cover, m.quantum, m.intervals, params.config_cap);
  return m;
}

struct conf_ip_solution {
  std::vector<std::int64_t> x;  // per configuration
  std::int64_t cost = 0;
};

namespace detail {

class conf_ip_search {
 public:
  explicit conf_ip_search(const conf_model& m) : m_(m) {
    const std::size_t dims = m.components.size() + m.cover.size();
    touching_.resize(dims);
    for (std::size_t c = 0; c < m.configs.size(); ++c) {
      const auto& cfg = m.configs[c];
      for (std::size_t j = 0; j < m.components.size(); ++j) {
        if (cfg.large[j] > 0) touching_[j].push_back(c);
      }
      for (std::size_t i = 0; i < m.cover.size(); ++i) {
        if (cfg.small[i] > 0) touching_[m.components.size() + i].push_back(c);
      }
    }
  }

  conf_ip_solution solve() {
    std::vector<std::int64_t> state;
    for (const auto& comp : m_.components) state.push_back(comp.demand);
    for (auto c : m_.cover) state.push_back(c);
    const std::int64_t best = value(state);
    if (best == infinity) throw infeasible_model("configuration IP has no feasible solution");
    conf_ip_solution sol;
    sol.x.assign(m_.configs.size(), 0);
    sol.cost = best;
    while (true) {
      const auto it = memo_.find(state);
      if (it == memo_.end() || it->second.first == 0) break;
      const std::size_t c = it->second.second;
      ++sol.x[c];
      apply(state, c);
    }
    return sol;
  }

 private:
  static constexpr std::int64_t infinity = std::numeric_limits<std::int64_t>::max() / 4;

  bool fits(const std::vector<std::int64_t>& state, std::size_t c) const {
    const auto& cfg = m_.configs[c];
    for (std::size_t j = 0; j < m_.components.size(); ++j) {
      if (cfg.large[j] > state[j]) return false;
    }
    return true;
  }

  void apply(std::vector<std::int64_t>& state, std::size_t c) const {
    const auto& cfg = m_.configs[c];
    const std::size_t nc = m_.components.size();
    for (std::size_t j = 0; j < nc; ++j) state[j] -= cfg.large[j];
    for (std::size_t i = 0; i < m_.cover.size(); ++i) state[nc + i] = std::max<std::int64_t>(0, state[nc + i] - cfg.small[i]);
  }

  std::int64_t value(const std::vector<std::int64_t>& state) {
    const auto first = std::find_if(state.begin(), state.end(), [](std::int64_t v) { return v > 0; });
    if (first == state.end()) {
      memo_[state] = {0, 0};
      return 0;
    }
    if (auto it = memo_.find(state); it != memo_.end()) return it->second.first;
    const auto dim = static_cast<std::size_t>(first - state.begin());
    std::int64_t best = infinity;
    std::size_t arg = 0;
    // Some bin of any solution covers the first open requirement.
    for (std::size_t c : touching_[dim]) {
      if (!fits(state, c)) continue;
      std::vector<std::int64_t> next = state;
      apply(next, c);
      const std::int64_t v = value(next);
      if (v != infinity && v + 1 < best) {
        best = v + 1;
        arg = c;
      }
    }
    memo_[state] = {best, arg};
    return best;
  }

  const conf_model& m_;
  std::vector<std::vector<std::size_t>> touching_;
  std::map<std::vector<std::int64_t>, std::pair<std::int64_t, std::size_t>> memo_;
};

}  // namespace detail

/// Minimizes the number of configured bins subject to the group equalities
/// and the small-volume covering constraints.
inline conf_ip_solution solve_conf_ip(const conf_model& m) { return detail::conf_ip_search(m).solve(); }

/// Independent check of solve_conf_ip: a table over every partial amount
/// packed, filled configuration by configuration. Sum of demands <= 24.
inline std::int64_t solve_conf_ip_bruteforce(const conf_model& m) {
  std::int64_t total_demand = 0;
  for (const auto& c : m.components) total_demand += c.demand;
  if (total_demand > 24) throw std::invalid_argument("brute force IP accepts demands summing to at most 24");
  std::vector<std::int64_t> radix;
  for (const auto& c : m.components) radix.push_back(c.demand + 1);
  for (auto c : m.cover) radix.push_back(c + 1);
  std::size_t states = 1;
  for (auto r : radix) {
    states *= static_cast<std::size_t>(r);
    if (states > 20'000'000) throw std::invalid_argument("brute force IP state space too large");
  }
  constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> table(states, inf);
  table[0] = 0;
  const std::size_t dims = radix.size();
  const std::size_t nc = m.components.size();
  std::vector<std::int64_t> digits(dims);
  for (const auto& cfg : m.configs) {
    std::vector<std::int64_t> add(dims);
    bool useful = false;
    for (std::size_t j = 0; j < nc; ++j) {
      add[j] = cfg.large[j];
      useful = useful || add[j] > 0;
    }
    for (std::size_t i = 0; i < m.cover.size(); ++i) {
      add[nc + i] = cfg.small[i];
      useful = useful || add[nc + i] > 0;
    }
    if (!useful) continue;
    for (std::size_t s = 0; s < states; ++s) {
      if (table[s] == inf) continue;
      std::size_t rest = s;
      for (std::size_t d = 0; d < dims; ++d) {
        digits[d] = static_cast<std::int64_t>(rest % static_cast<std::size_t>(radix[d]));
        rest /= static_cast<std::size_t>(radix[d]);
      }
      std::size_t target = 0, mult = 1;
      bool ok = true;
      for (std::size_t d = 0; d < dims; ++d) {
        std::int64_t v = digits[d] + add[d];
        if (d < nc) {
          if (v >= radix[d]) {
            ok = false;
            break;
          }
        } else {
          v = std::min(v, radix[d] - 1);
        }
        target += static_cast<std::size_t>(v) * mult;
        mult *= static_cast<std::size_t>(radix[d]);
      }
      if (ok && table[s] + 1 < table[target]) table[target] = table[s] + 1;
    }
  }
  const std::int64_t best = table[states - 1];
  if (best == inf) throw infeasible_model("configuration IP has no feasible solution");
  return best;
}

struct post_process_result {
  packing padded;         // packing of the padded instance
  packing original;       // dummies removed, indices of the input
  std::size_t padded_bins = 0;
  std::size_t interval_bins = 0;
};

/// Turns an IP solution into a packing: x_C bins per configuration, large
/// items by group, small items streamed per interval under each bin's
/// volume cap, overflow items into per-interval bins.
inline post_process_result post_process(const conf_ip_solution& x, const conf_model& m, const padded_instance& padded,
                                        const std::vector<grouped_interval>& grouped, const scheme_params& params) {
  std::vector<std::vector<item_index>> bins;
  std::vector<std::size_t> bin_config;
  for (std::size_t c = 0; c < m.configs.size(); ++c) {
    for (std::int64_t r = 0; r < x.x[c]; ++r) {
      bins.emplace_back();
      bin_config.push_back(c);
    }
  }
  // large items
  std::vector<std::size_t> next(m.components.size(), 0);
  for (std::size_t b = 0; b < bins.size(); ++b) {
    const auto& cfg = m.configs[bin_config[b]];
    for (std::size_t j = 0; j < m.components.size(); ++j) {
      const auto& grp = grouped[m.components[j].interval].groups[m.components[j].group];
      for (std::int64_t r = 0; r < cfg.large[j]; ++r) {
        if (next[j] >= grp.size()) throw infeasible_model("post-process: group exhausted");
        bins[b].push_back(grp[next[j]++]);
      }
    }
  }
  for (std::size_t j = 0; j < m.components.size(); ++j) {
    if (next[j] != grouped[m.components[j].interval].groups[m.components[j].group].size()) {
      throw infeasible_model("post-process: group not fully packed");
    }
  }
  // small items
  const std::int64_t per_interval_bin = params.items_per_interval_bin();
  const std::size_t configured = bins.size();
  std::size_t interval_bins = 0;
  for (const auto& gi : grouped) {
    const int i = gi.index;
    std::vector<std::vector<item_index>> overflow;
    auto divert = [&](item_index it) {
      if (overflow.empty() || static_cast<std::int64_t>(overflow.back().size()) >= per_interval_bin) overflow.emplace_back();
      overflow.back().push_back(it);
    };
    std::size_t b = 0;
    auto advance = [&] {
      while (b < configured && m.configs[bin_config[b]].small[i] == 0) ++b;
    };
    advance();
    rational load;
    for (item_index it : gi.small) {
      if (b >= configured) throw infeasible_model("post-process: small volume of interval " + std::to_string(i) + " not covered");
      const rational cap = m.quantum * rational(m.configs[bin_config[b]].small[i]);
      if (load + padded.inst[it] <= cap) {
        bins[b].push_back(it);
        load += padded.inst[it];
      } else {
        divert(it);
        ++b;
        advance();
        load = 0;
      }
    }
    interval_bins += overflow.size();
    for (auto& o : overflow) bins.push_back(std::move(o));
  }
  for (auto& bin : bins) std::sort(bin.begin(), bin.end());
  std::erase_if(bins, [](const auto& bin) { return bin.empty(); });

  post_process_result res;
  res.padded = packing::from_bins(padded.inst, bins);
  res.padded_bins = res.padded.cost();
  res.interval_bins = interval_bins;

  std::vector<std::vector<item_index>> stripped;
  std::size_t n_original = 0;
  for (auto o : padded.original) n_original += o >= 0 ? 1 : 0;
  instance original_sizes;
  original_sizes.reserve(n_original);
  for (std::size_t j = 0; j < padded.inst.size(); ++j) {
    if (!padded.dummy[j]) original_sizes.push_back(padded.inst[j]);
  }
  for (const auto& bin : bins) {
    std::vector<item_index> kept;
    for (item_index it : bin) {
      if (!padded.dummy[it]) kept.push_back(static_cast<item_index>(padded.original[it]));
    }
    if (!kept.empty()) stripped.push_back(std::move(kept));
  }
  res.original = packing::from_bins(original_sizes, stripped);
  return res;
}

/// Everything computed for one certificate.
struct aptas_guess {
  certificate cert;
  padded_instance padded;
  std::vector<grouped_interval> grouped;
  conf_model model;
  conf_ip_solution solution;
  post_process_result packed;
};

struct aptas_result {
  packing best;
  certificate best_cert;
  std::size_t guesses = 0;
};

/// Runs every certificate through padding, grouping, the configuration IP
/// and post-processing; keeps the cheapest packing (first certificate in
/// lexicographic order on ties).
inline aptas_result run_aptas(const instance& inst, const scheme_params& params,
                              const std::function<void(const aptas_guess&)>& observer = {}) {
  params.validate();
  aptas_result res;
  if (inst.empty()) {
    res.best = packing(0);
    return res;
  }
  std::optional<std::size_t> best_cost;
  for_each_certificate(inst.size(), params, [&](const certificate& cert) {
    aptas_guess g;
    g.cert = cert;
    g.padded = pad_with_dummies(inst, cert, params);
    g.grouped = linear_grouping(g.padded, params);
    try {
      g.model = build_model(g.grouped, params);
    } catch (const configuration_cap_exceeded& e) {
      throw configuration_cap_exceeded(std::string(e.what()) + " for certificate " + certificate_str(cert));
    }
    g.solution = solve_conf_ip(g.model);
    g.packed = post_process(g.solution, g.model, g.padded, g.grouped, params);
    ++res.guesses;
    const std::size_t cost = g.packed.original.cost();
    if (!best_cost || cost < *best_cost) {
      best_cost = cost;
      res.best = g.packed.original;
      res.best_cert = cert;
    }
    if (observer) observer(g);
  });
  return res;
}

}  // namespace ooebp

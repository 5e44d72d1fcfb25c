#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ooebp/adversary.hpp"
#include "ooebp/core.hpp"
#include "ooebp/offline_exact.hpp"
#include "ooebp/online.hpp"
#include "ooebp/params.hpp"
#include "ooebp/real.hpp"

namespace ooebp {

enum class weight_variant { w_with_ones, v_with_ones, w_no_ones, v_no_ones, seven_power };

/// Item weights for the class algorithms, cached per class.
class weight_scheme {
 public:
  weight_scheme(weight_variant variant, const class_params& params) : variant_(variant), M_(params.M) {
    if (variant == weight_variant::seven_power) throw std::invalid_argument("seven_power weights take no class params");
    params.validate();
    per_class_.resize(static_cast<std::size_t>(M_) + 1);
    const bool w = variant == weight_variant::w_with_ones || variant == weight_variant::w_no_ones;
    const bool no_ones = variant == weight_variant::w_no_ones || variant == weight_variant::v_no_ones;
    for (int i = 1; i < M_; ++i) {
      const real& b = params.beta_real[i];
      const real denom = real(i + 1) - b;
      if (w) {
        per_class_[i] = (no_ones ? real(1) - b / 2 : real(1) - b) / denom;
      } else {
        per_class_[i] = 1 / denom;
      }
    }
    const real& bm = params.beta_real[M_];
    const real tiny_denom = real(1) - bm / M_;
    if (w) {
      tiny_factor_ = (no_ones ? real(1) - bm / 2 : real(1) - bm) / tiny_denom;
    } else {
      tiny_factor_ = 1 / tiny_denom;
    }
    if (no_ones) {
      per_class_[0] = 0;  // unused: no 1-items
      per_class_[1] = w ? real(1) / 2 : real(0);
    } else {
      per_class_[0] = w ? 1 : 0;
    }
  }

  [[nodiscard]] weight_variant variant() const noexcept { return variant_; }
  [[nodiscard]] int M() const noexcept { return M_; }
  [[nodiscard]] const real& class_weight(int c) const { return per_class_.at(c); }
  /// Weight per unit size of tiny items.
  [[nodiscard]] const real& tiny_factor() const noexcept { return tiny_factor_; }

  [[nodiscard]] real operator()(const rational& size) const {
    if (size <= rational(0) || size > rational(1)) throw std::domain_error("weight: size outside (0,1]");
    const int c = classify(size, M_);
    if (c == M_) return to_real(size) * tiny_factor_;
    return per_class_[c];
  }

 private:
  weight_variant variant_;
  int M_;
  std::vector<real> per_class_;
  real tiny_factor_;
};

/// Weight of an item in the powers-of-seven inputs: 2 for sizes 1, 1/2, 1/3
/// and 1/7^(i-1) for size 1/7^i.
inline real seven_power_weight(const rational& size) {
  if (size.num() == 1 && size.den() <= 3) return 2;
  if (size.num() == 1) {
    std::int64_t d = size.den();
    int i = 0;
    while (d % 7 == 0) {
      d /= 7;
      ++i;
    }
    if (d == 1 && i >= 1) return real(7) / boost::multiprecision::pow(real(7), i);
  }
  throw std::domain_error("seven_power weight: size " + size.str() + " is not an input size");
}

inline real weight(weight_variant variant, const class_params* params, const rational& size) {
  if (variant == weight_variant::seven_power) return seven_power_weight(size);
  if (params == nullptr) throw std::invalid_argument("weight: class params required");
  return weight_scheme(variant, *params)(size);
}

// ------------------------------------------------------------ partition

enum class algorithm_variant { with_ones, no_ones };

struct partition_report {
  std::optional<item_index> x;
  std::vector<item_index> I1;
  std::vector<item_index> I2;
  std::vector<bin_id> removed_bins;
  std::vector<item_index> removed_items;
  real W = 0;
  real V = 0;
  std::size_t cost = 0;
  int M = 0;

  [[nodiscard]] real bound() const { return W + V + 16 * M; }
  [[nodiscard]] bool holds() const { return real(cost) <= bound(); }
};

inline partition_report trace_partition(const instance& inst, const class_run& run, const class_params& params,
                                        algorithm_variant variant) {
  const algorithm_trace& tr = run.trace;
  const packing& p = run.result;
  const bool no_ones = variant == algorithm_variant::no_ones;
  partition_report rep;
  rep.M = params.M;
  rep.cost = p.cost();

  for (item_index t = 0; t < tr.steps.size(); ++t) {
    const item_event e = tr.steps[t].event;
    const bool into_new = no_ones ? (e == item_event::opened_pair || e == item_event::into_pair) : e == item_event::opened_one;
    if (into_new) rep.x = t;
  }

  std::vector<char> removed(p.bin_count(), 0);
  for (bin_id b = 0; b < p.bin_count(); ++b) {
    if (tr.active_at_end(b) || (rep.x && tr.active_before(b, *rep.x))) {
      removed[b] = 1;
      rep.removed_bins.push_back(b);
    }
  }

  const weight_scheme w(no_ones ? weight_variant::w_no_ones : weight_variant::w_with_ones, params);
  const weight_scheme v(no_ones ? weight_variant::v_no_ones : weight_variant::v_with_ones, params);
  std::vector<std::int64_t> count1(static_cast<std::size_t>(params.M) + 1, 0), count2(count1.size(), 0);
  real tiny1 = 0, tiny2 = 0;
  for (item_index t = 0; t < inst.size(); ++t) {
    if (removed[p.bin_of(t)]) {
      rep.removed_items.push_back(t);
      continue;
    }
    const bool first = rep.x && t <= *rep.x;
    (first ? rep.I1 : rep.I2).push_back(t);
    const int c = classify(inst[t], params.M);
    if (c == params.M) {
      (first ? tiny1 : tiny2) += to_real(inst[t]);
    } else {
      ++(first ? count1 : count2)[c];
    }
  }
  for (int c = 0; c < params.M; ++c) {
    if (count1[c] != 0) rep.W += w.class_weight(c) * count1[c];
    if (count2[c] != 0) rep.V += v.class_weight(c) * count2[c];
  }
  rep.W += tiny1 * w.tiny_factor();
  rep.V += tiny2 * v.tiny_factor();
  return rep;
}

// ------------------------------------------------- bin weight search

/// Search exhausted its node budget.
class search_too_large : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct bin_weight_result {
  real max_weight = 0;
  weight_variant side = weight_variant::w_with_ones;
  std::vector<rational> witness;  // items below 1 in total, then the exceeding item
  real tiny_fill = 0;             // weight bound credited to space left for tiny items
  std::uint64_t nodes = 0;
};

namespace detail {

using big_rational = boost::multiprecision::cpp_rational;

// Best multiset of unit fractions 1/q with total below 1, plus a density
// fill for the space left (tiny items). Weights are searched in long double
// and re-evaluated at full precision for the winner.
class unit_fraction_search {
 public:
  unit_fraction_search(std::vector<std::int64_t> qs, std::vector<long double> weights, long double fill_density,
                       big_rational capacity, std::uint64_t budget)
      : qs_(std::move(qs)), w_(std::move(weights)), fill_(fill_density), cap_(std::move(capacity)), budget_(budget) {
    cap_ld_ = static_cast<long double>(cap_);
    suffix_.assign(qs_.size() + 1, fill_);
    for (std::size_t j = qs_.size(); j-- > 0;) {
      suffix_[j] = std::max(suffix_[j + 1], w_[j] * static_cast<long double>(qs_[j]));
    }
    counts_.assign(qs_.size(), 0);
  }

  void run() {
    best_ = -1;
    dfs(0, 0.0L, 0.0L);
  }

  [[nodiscard]] const std::vector<std::int64_t>& best_counts() const { return best_counts_; }
  [[nodiscard]] std::uint64_t nodes() const { return nodes_; }
  [[nodiscard]] const std::vector<std::int64_t>& qs() const { return qs_; }

 private:
  // load + c/q strictly below capacity, exact near ties
  bool fits(long double load, std::size_t j, std::int64_t c) const {
    const long double total = load + static_cast<long double>(c) / static_cast<long double>(qs_[j]);
    if (total < cap_ld_ - 1e-12L) return true;
    if (total > cap_ld_ + 1e-12L) return false;
    big_rational exact = big_rational(c, qs_[j]);
    for (std::size_t i = 0; i < j; ++i) {
      if (counts_[i] != 0) exact += big_rational(counts_[i], qs_[i]);
    }
    return exact < cap_;
  }

  void dfs(std::size_t j, long double load, long double cur) {
    if (++nodes_ > budget_) throw search_too_large("weight search exceeded its node budget");
    const long double room = cap_ld_ - load;
    if (cur + room * suffix_[j] <= best_ + 1e-18L) return;
    if (j == qs_.size()) {
      const long double total = cur + fill_ * room;
      if (total > best_) {
        best_ = total;
        best_counts_ = counts_;
      }
      return;
    }
    const long double size = 1.0L / static_cast<long double>(qs_[j]);
    auto c = static_cast<std::int64_t>(std::floor(room * static_cast<long double>(qs_[j]))) + 1;
    while (c > 0 && !fits(load, j, c)) --c;
    for (; c >= 0; --c) {
      counts_[j] = c;
      dfs(j + 1, load + static_cast<long double>(c) * size, cur + static_cast<long double>(c) * w_[j]);
    }
    counts_[j] = 0;
  }

  std::vector<std::int64_t> qs_;
  std::vector<long double> w_;
  long double fill_;
  big_rational cap_;
  long double cap_ld_ = 1;
  std::uint64_t budget_;
  std::vector<long double> suffix_;
  std::vector<std::int64_t> counts_;
  std::vector<std::int64_t> best_counts_;
  long double best_ = -1;
  std::uint64_t nodes_ = 0;
};

inline real fraction_to_real(const big_rational& r) {
  return real(boost::multiprecision::numerator(r).str()) / real(boost::multiprecision::denominator(r).str());
}

}  // namespace detail

/// Largest weight of one bin over the grid {1/q : q <= grid_max_q}: items of
/// total below 1 and one more (exceeding) item. Sizes in the tiny class are
/// replaced by their weight density applied to the space left.
inline bin_weight_result max_bin_weight(const weight_scheme& ws, int grid_max_q, std::uint64_t budget = 500'000'000) {
  if (grid_max_q < 1) throw std::invalid_argument("grid_max_q must be positive");
  const int M = ws.M();
  std::vector<std::int64_t> qs;
  std::vector<long double> wl;
  bool tiny_on_grid = false;
  for (std::int64_t q = 2; q <= grid_max_q; ++q) {
    const int c = classify(rational(1, q), M);
    if (c == M) {
      tiny_on_grid = true;
      continue;
    }
    qs.push_back(q);
    wl.push_back(static_cast<long double>(ws.class_weight(c)));
  }
  const long double fill = tiny_on_grid ? static_cast<long double>(ws.tiny_factor()) : 0.0L;
  detail::unit_fraction_search search(qs, wl, fill, detail::big_rational(1), budget);
  search.run();

  bin_weight_result res;
  res.side = ws.variant();
  res.nodes = search.nodes();
  detail::big_rational load = 0;
  real total = 0;
  for (std::size_t j = 0; j < qs.size(); ++j) {
    for (std::int64_t c = 0; c < search.best_counts()[j]; ++c) {
      res.witness.push_back(rational(1, qs[j]));
      total += ws(rational(1, qs[j]));
      load += detail::big_rational(1, qs[j]);
    }
  }
  if (tiny_on_grid) {
    res.tiny_fill = ws.tiny_factor() * (1 - detail::fraction_to_real(load));
    total += res.tiny_fill;
  }
  // Exceeding item: the heaviest single item on the grid (tiny ones by their
  // supremum factor / M).
  real best_single = 0;
  rational best_item(1);
  for (std::int64_t q = 1; q <= grid_max_q; ++q) {
    const rational s(1, q);
    if (classify(s, M) == M) continue;
    const real wq = ws(s);
    if (wq > best_single) {
      best_single = wq;
      best_item = s;
    }
  }
  if (tiny_on_grid && ws.tiny_factor() / M > best_single) {
    best_single = ws.tiny_factor() / M;
    best_item = rational(1, M + 1);
  }
  res.witness.push_back(best_item);
  res.max_weight = total + best_single;
  return res;
}

/// Maximum over the two weight functions of a pair; each optimal bin holds
/// items of only one part.
inline bin_weight_result verify_bin_weight_bound(algorithm_variant variant, const class_params& params, int grid_max_q,
                                                 std::uint64_t budget = 500'000'000) {
  const bool no_ones = variant == algorithm_variant::no_ones;
  const weight_scheme w(no_ones ? weight_variant::w_no_ones : weight_variant::w_with_ones, params);
  const weight_scheme v(no_ones ? weight_variant::v_no_ones : weight_variant::v_with_ones, params);
  bin_weight_result a = max_bin_weight(w, grid_max_q, budget);
  bin_weight_result b = max_bin_weight(v, grid_max_q, budget);
  b.nodes += a.nodes;
  a.nodes = b.nodes;
  return a.max_weight >= b.max_weight ? a : b;
}

/// Total weight of an explicit bin.
inline real bin_weight(const weight_scheme& ws, const std::vector<rational>& items) {
  real total = 0;
  for (const auto& s : items) total += ws(s);
  return total;
}

// ---------------------------------------------- powers-of-seven weights

/// Exact maximum weight of a bin whose items come from the given size list
/// (sizes with weights), by a dynamic program over multiples of the common
/// denominator: a subset below 1 plus one exceeding item.
inline rational max_bin_weight_exact(const std::vector<rational>& sizes, const std::vector<rational>& weights) {
  if (sizes.size() != weights.size()) throw std::invalid_argument("sizes and weights differ in length");
  std::int64_t unit = 1;
  for (const auto& s : sizes) unit = detail::lcm64(unit, s.den());
  if (unit > 50'000'000) throw search_too_large("common denominator too large for the exact table");
  const auto cap = static_cast<std::size_t>(unit - 1);  // total strictly below 1
  std::vector<std::optional<rational>> best(cap + 1);
  best[0] = rational(0);
  for (std::size_t u = 1; u <= cap; ++u) {
    for (std::size_t j = 0; j < sizes.size(); ++j) {
      const auto su = static_cast<std::size_t>((sizes[j] * rational(unit)).num());
      if (su > u || !best[u - su]) continue;
      const rational cand = *best[u - su] + weights[j];
      if (!best[u] || cand > *best[u]) best[u] = cand;
    }
  }
  rational top(0);
  for (const auto& b : best) {
    if (b && *b > top) top = *b;
  }
  rational single(0);
  for (const auto& w : weights) single = std::max(single, w);
  return top + single;
}

/// Largest bin weight with items no earlier than type (k,7) in the
/// powers-of-seven inputs; with_ones adds 1-items as a possible type.
inline rational seven_power_max_weight(int k, bool with_ones) {
  if (k < 1 || k > 6) throw std::invalid_argument("k must be in [1, 6]");
  std::vector<rational> sizes, weights;
  std::int64_t p = 1;
  for (int i = 1; i <= k; ++i) {
    sizes.push_back(rational(1, p * 7));
    weights.push_back(rational(1, p));
    p *= 7;
  }
  sizes.push_back(rational(1, 3));
  weights.push_back(rational(2));
  sizes.push_back(rational(1, 2));
  weights.push_back(rational(2));
  if (with_ones) {
    sizes.push_back(rational(1));
    weights.push_back(rational(2));
  }
  return max_bin_weight_exact(sizes, weights);
}

/// Same for bins with items no earlier than type j in {1, 2, 3}.
inline rational seven_power_max_weight_types(int j, bool with_ones) {
  if (j < 1 || j > 3 || (j == 1 && !with_ones)) throw std::invalid_argument("type out of range");
  std::vector<rational> sizes, weights;
  for (int t = j; t >= 1; --t) {
    if (t == 1 && !with_ones) continue;
    sizes.push_back(rational(1, t));
    weights.push_back(rational(2));
  }
  return max_bin_weight_exact(sizes, weights);
}

// ------------------------------------------------------- lower bound

struct lower_bound_report {
  int N = 0;
  real numerator = 0;
  real denominator = 0;
  real ratio = 0;
  bool with_ones = true;
};

inline lower_bound_report lower_bound_value(int N, bool with_ones) {
  if (N < 3) throw std::invalid_argument("lower bound: N must be at least 3");
  lower_bound_report r;
  r.N = N;
  r.with_ones = with_ones;
  const real seven = 7;
  r.numerator = 6 + (boost::multiprecision::pow(seven, N) - 1) / (6 * boost::multiprecision::pow(seven, N - 1));
  real series = 0;
  for (int i = 1; i <= N - 1; ++i) {
    series += 1 / (boost::multiprecision::pow(seven, 2 * i) + boost::multiprecision::pow(seven, i - 1));
  }
  r.denominator = series + real("4.375");
  if (!with_ones) r.denominator += real(2) / 3;
  r.ratio = r.numerator / r.denominator;
  return r;
}

/// First six terms of the denominator series.
inline real lower_bound_series_head() {
  real s = 0;
  const real seven = 7;
  for (int i = 1; i <= 6; ++i) s += 1 / (boost::multiprecision::pow(seven, 2 * i) + boost::multiprecision::pow(seven, i - 1));
  return s;
}

// ---------------------------------------------- reciprocal sums

struct reciprocal_result {
  real max_weight = 0;
  std::vector<std::int64_t> denominators;  // chosen items 1/q
  real fill = 0;
};

/// Maximum of sum 1/(q-1) over multisets of items 1/q (q <= grid_max_q) with
/// total size below budget; the space left is credited at the density of
/// items just below the grid, (G+1)/G.
inline reciprocal_result greedy_reciprocal_check(const rational& budget, int grid_max_q,
                                                 std::uint64_t node_budget = 200'000'000) {
  if (budget >= rational(1)) throw std::invalid_argument("budget must be below 1");
  reciprocal_result res;
  if (budget <= rational(0)) return res;
  std::vector<std::int64_t> qs;
  std::vector<long double> wl;
  for (std::int64_t q = 2; q <= grid_max_q; ++q) {
    if (rational(1, q) >= budget) continue;
    qs.push_back(q);
    wl.push_back(1.0L / static_cast<long double>(q - 1));
  }
  const long double fill_density =
      static_cast<long double>(grid_max_q + 1) / static_cast<long double>(grid_max_q);
  detail::unit_fraction_search search(qs, wl, fill_density, detail::big_rational(budget.num(), budget.den()), node_budget);
  search.run();
  detail::big_rational load = 0;
  for (std::size_t j = 0; j < qs.size(); ++j) {
    for (std::int64_t c = 0; c < search.best_counts()[j]; ++c) {
      res.denominators.push_back(qs[j]);
      res.max_weight += real(1) / (qs[j] - 1);
      load += detail::big_rational(1, qs[j]);
    }
  }
  const detail::big_rational room = detail::big_rational(budget.num(), budget.den()) - load;
  res.fill = detail::fraction_to_real(room) * (real(grid_max_q) + 1) / grid_max_q;
  res.max_weight += res.fill;
  return res;
}

// ------------------------------------------------------------ reports

enum class algorithm_id { nf, nf2, class_with_ones, class_no_ones };

inline std::string algorithm_name(algorithm_id a) {
  switch (a) {
    case algorithm_id::nf: return "nf";
    case algorithm_id::nf2: return "nf2";
    case algorithm_id::class_with_ones: return "class";
    case algorithm_id::class_no_ones: return "class-no-ones";
  }
  return "?";
}

inline algorithm_id parse_algorithm(const std::string& s) {
  if (s == "nf") return algorithm_id::nf;
  if (s == "nf2") return algorithm_id::nf2;
  if (s == "class") return algorithm_id::class_with_ones;
  if (s == "class-no-ones") return algorithm_id::class_no_ones;
  throw std::invalid_argument("unknown algorithm: " + s);
}

/// Class count for the class algorithms on a family: the bad examples need
/// classes for their smallest items.
inline int default_class_M(algorithm_id alg, std::optional<family> fam = std::nullopt) {
  if (alg == algorithm_id::class_no_ones) return fam == family::sec6_bad ? 100001 : 100;
  if (fam == family::sec5_bad_general) return 214000;
  return 1000;
}

inline packing run_algorithm(algorithm_id alg, const instance& inst, int M) {
  switch (alg) {
    case algorithm_id::nf: return next_fit(inst);
    case algorithm_id::nf2: return nf2(inst);
    case algorithm_id::class_with_ones: return class_algorithm(inst, default_params_with_ones(M)).result;
    case algorithm_id::class_no_ones: return class_algorithm_no_ones(inst, default_params_no_ones(M)).result;
  }
  throw std::logic_error("unreachable");
}

enum class opt_mode { exact, constructive };

struct report_row {
  std::string family;
  std::int64_t N = 0;
  std::size_t n = 0;
  std::string alg;
  std::size_t alg_cost = 0;
  std::size_t opt = 0;
  long double ratio = 0;
};

inline const char* report_header = "family,N,n,alg,alg_cost,opt,ratio";

inline std::string format_row(const report_row& r) {
  char ratio[64];
  std::snprintf(ratio, sizeof ratio, "%.12Lf", r.ratio);
  return r.family + "," + std::to_string(r.N) + "," + std::to_string(r.n) + "," + r.alg + "," +
         std::to_string(r.alg_cost) + "," + std::to_string(r.opt) + "," + ratio;
}

inline report_row make_row(const std::string& fam, std::int64_t N, const instance& inst, algorithm_id alg,
                           std::size_t alg_cost, std::size_t opt) {
  report_row r;
  r.family = fam;
  r.N = N;
  r.n = inst.size();
  r.alg = algorithm_name(alg);
  r.alg_cost = alg_cost;
  r.opt = opt;
  r.ratio = opt == 0 ? 0.0L : static_cast<long double>(alg_cost) / static_cast<long double>(opt);
  return r;
}

/// One row per N. Constructive mode validates the construction first.
inline std::vector<report_row> ratio_report(algorithm_id alg, family_spec spec, const std::vector<std::int64_t>& Ns,
                                            opt_mode mode, std::optional<int> class_M = std::nullopt,
                                            const solver_limits& limits = {}) {
  std::vector<report_row> rows;
  for (std::int64_t N : Ns) {
    spec.N = N;
    const instance inst = generate(spec);
    std::size_t opt;
    if (mode == opt_mode::exact) {
      opt = optimal_cost(inst, limits).cost;
    } else {
      const packing p = constructive_opt(spec, inst);
      if (auto v = validate_packing(inst, p)) throw std::logic_error("constructive packing invalid: " + v->message);
      opt = p.cost();
    }
    const packing a = run_algorithm(alg, inst, class_M.value_or(default_class_M(alg, spec.id)));
    rows.push_back(make_row(family_name(spec.id), N, inst, alg, a.cost(), opt));
  }
  return rows;
}

}  // namespace ooebp

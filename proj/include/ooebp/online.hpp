#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ooebp/core.hpp"
#include "ooebp/params.hpp"

namespace ooebp {

/// Thrown when an algorithm receives input outside its domain.
class unsupported_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Class 0 for 1-items, i for sizes in [1/(i+1), 1/i) with i < M, M for
/// sizes below 1/M.
inline int classify(const rational& size, int M) {
  if (size >= rational(1)) return 0;
  if (size < rational(1, M)) return M;
  // size in [1/(i+1), 1/i)  <=>  i = ceil(1/size) - 1
  return static_cast<int>((rational(1) / size).ceil()) - 1;
}

inline packing next_fit(const instance& inst) {
  packing p(inst.size());
  bin_id cur = no_bin;
  for (item_index i = 0; i < inst.size(); ++i) {
    if (cur == no_bin || !bin_can_accept(p[cur])) cur = p.open_bin();
    p.place(cur, i, inst[i]);
  }
  return p;
}

/// Next Fit run separately on sizes below 1/2 and on sizes in [1/2, 1).
inline packing nf2(const instance& inst) {
  packing p(inst.size());
  bin_id streams[2] = {no_bin, no_bin};
  const rational half(1, 2);
  for (item_index i = 0; i < inst.size(); ++i) {
    if (inst.is_one(i)) throw unsupported_input("nf2: input contains a 1-item (index " + std::to_string(i + 1) + ")");
    bin_id& cur = streams[inst[i] >= half ? 1 : 0];
    if (cur == no_bin || !bin_can_accept(p[cur])) cur = p.open_bin();
    p.place(cur, i, inst[i]);
  }
  return p;
}

enum class bin_kind : std::uint8_t {
  one,    // opened by a 1-item
  small,  // planned i items (or load in [1-1/M, 1) for tiny items)
  large,  // planned i+1 items (or load >= 1 for tiny items)
  pair,   // class-1 bin when there are no 1-items
};

enum class item_event : std::uint8_t {
  into_active,
  opened_small,
  opened_large,
  into_ready,  // a 1-item (or class-1 item) completing a ready bin
  opened_one,  // a 1-item opening its own bin
  opened_pair,
  into_pair,
};

struct trace_step {
  int cls = 0;
  bin_id bin = no_bin;
  item_event event = item_event::into_active;
  bool deactivated = false;  // the bin stopped being active after this item
  // Counts of the class before this item, meaningful when a bin is opened.
  std::size_t n_small_before = 0;
  std::size_t n_large_before = 0;
};

struct algorithm_trace {
  static constexpr std::size_t never = static_cast<std::size_t>(-1);

  std::vector<trace_step> steps;  // one per item
  std::vector<bin_kind> kind;     // per bin
  std::vector<int> bin_class;     // per bin
  std::vector<std::size_t> opened_at;       // item index that opened the bin
  std::vector<std::size_t> deactivated_at;  // item index after which it became inactive
  std::vector<std::size_t> used_at;         // item index that made a ready bin used

  /// Whether the bin was active when item t arrived (before t is packed).
  [[nodiscard]] bool active_before(bin_id b, std::size_t t) const {
    if (kind[b] != bin_kind::small && kind[b] != bin_kind::large) return false;
    return opened_at[b] < t && (deactivated_at[b] == never || deactivated_at[b] >= t);
  }
  [[nodiscard]] bool active_at_end(bin_id b) const {
    return (kind[b] == bin_kind::small || kind[b] == bin_kind::large) && deactivated_at[b] == never;
  }
};

struct class_run {
  packing result;
  algorithm_trace trace;
};

namespace detail {

struct class_slot {
  bin_id active = no_bin;
  bool active_small = false;
  std::size_t count = 0;  // items of the class in the active bin
  std::size_t n_small = 0;
  std::size_t n_large = 0;
};

inline bool open_small(const class_params& params, int cls, const class_slot& s) {
  const wide_rational& b = params.beta[cls];
  if (b == wide_rational(0)) return false;
  if (b == wide_rational(1)) return true;
  // n_s <= beta * n  with beta = num/den
  const auto n = static_cast<__int128>(s.n_small + s.n_large);
  return checked_mul(static_cast<__int128>(s.n_small), b.den()) <= checked_mul(b.num(), n);
}

template <bool NoOnes>
class_run run_class_algorithm(const instance& inst, const class_params& params) {
  params.validate();
  const int M = params.M;
  class_run run{packing(inst.size()), {}};
  packing& p = run.result;
  algorithm_trace& tr = run.trace;
  tr.steps.resize(inst.size());
  std::vector<class_slot> slots(static_cast<std::size_t>(M) + 1);
  std::set<std::pair<int, bin_id>> ready;  // ordered by class, then age
  bin_id pending_pair = no_bin;
  const rational tiny_small_limit = rational(1) - rational(1, M);

  auto new_bin = [&](int cls, bin_kind k, std::size_t t) {
    const bin_id b = p.open_bin();
    tr.kind.push_back(k);
    tr.bin_class.push_back(cls);
    tr.opened_at.push_back(t);
    tr.deactivated_at.push_back(algorithm_trace::never);
    tr.used_at.push_back(algorithm_trace::never);
    return b;
  };

  for (item_index t = 0; t < inst.size(); ++t) {
    const rational& size = inst[t];
    const int cls = classify(size, M);
    trace_step& step = tr.steps[t];
    step.cls = cls;

    const bool ready_like = NoOnes ? cls == 1 : cls == 0;
    if (NoOnes && cls == 0) throw unsupported_input("class algorithm without 1-items: input contains a 1-item (index " + std::to_string(t + 1) + ")");

    if (ready_like) {
      if (!ready.empty()) {
        const bin_id b = ready.begin()->second;
        ready.erase(ready.begin());
        p.place(b, t, size);
        tr.used_at[b] = t;
        step.bin = b;
        step.event = item_event::into_ready;
      } else if (NoOnes && pending_pair != no_bin) {
        p.place(pending_pair, t, size);
        step.bin = pending_pair;
        step.event = item_event::into_pair;
        pending_pair = no_bin;
      } else {
        const bin_id b = new_bin(cls, NoOnes ? bin_kind::pair : bin_kind::one, t);
        p.place(b, t, size);
        step.bin = b;
        step.event = NoOnes ? item_event::opened_pair : item_event::opened_one;
        if (NoOnes) pending_pair = b;
      }
      continue;
    }

    class_slot& s = slots[cls];
    if (s.active == no_bin) {
      step.n_small_before = s.n_small;
      step.n_large_before = s.n_large;
      const bool small = open_small(params, cls, s);
      s.active = new_bin(cls, small ? bin_kind::small : bin_kind::large, t);
      s.active_small = small;
      s.count = 0;
      (small ? s.n_small : s.n_large)++;
      step.event = small ? item_event::opened_small : item_event::opened_large;
    } else {
      step.event = item_event::into_active;
    }
    const bin_id b = s.active;
    p.place(b, t, size);
    ++s.count;
    step.bin = b;

    bool done;
    if (cls < M) {
      done = s.count == static_cast<std::size_t>(s.active_small ? cls : cls + 1);
    } else {
      done = s.active_small ? p[b].load >= tiny_small_limit : p[b].load >= rational(1);
    }
    if (done) {
      step.deactivated = true;
      tr.deactivated_at[b] = t;
      if (s.active_small) ready.emplace(cls, b);
      s.active = no_bin;
    }
  }
  return run;
}

}  // namespace detail

inline class_run class_algorithm(const instance& inst, const class_params& params) {
  return detail::run_class_algorithm<false>(inst, params);
}

/// Variant for inputs without 1-items: class-1 items take the role of
/// 1-items and otherwise pair up.
inline class_run class_algorithm_no_ones(const instance& inst, const class_params& params) {
  return detail::run_class_algorithm<true>(inst, params);
}

/// Replays a trace against the rules and returns the first inconsistency.
inline std::optional<std::string> check_class_trace(const instance& inst, const class_run& run,
                                                    const class_params& params, bool no_ones) {
  const packing& p = run.result;
  const algorithm_trace& tr = run.trace;
  const int M = params.M;
  if (tr.steps.size() != inst.size()) return "trace length differs from instance";
  if (tr.kind.size() != p.bin_count()) return "trace bin count differs from packing";
  if (auto v = validate_packing(inst, p)) return "invalid packing: " + v->message;

  std::vector<int> active_count(static_cast<std::size_t>(M) + 1, 0);
  std::vector<std::size_t> n_small(active_count.size(), 0), n_large(active_count.size(), 0);
  for (item_index t = 0; t < inst.size(); ++t) {
    const trace_step& st = tr.steps[t];
    if (p.bin_of(t) != st.bin) return "item " + std::to_string(t) + ": trace bin differs from packing";
    if (st.event == item_event::opened_small || st.event == item_event::opened_large) {
      const int c = st.cls;
      if (active_count[c] != 0) return "class " + std::to_string(c) + ": second active bin opened";
      if (st.n_small_before != n_small[c] || st.n_large_before != n_large[c]) return "opening counts do not replay";
      const wide_rational& b = params.beta[c];
      const auto n = static_cast<__int128>(n_small[c] + n_large[c]);
      bool want_small = wide_rational(static_cast<__int128>(n_small[c])) <= b * wide_rational(n);
      if (b == wide_rational(0)) want_small = false;
      if (b == wide_rational(1)) want_small = true;
      if (want_small != (st.event == item_event::opened_small)) return "opening rule violated at item " + std::to_string(t);
      ++active_count[c];
      (want_small ? n_small[c] : n_large[c])++;
    }
    if (st.deactivated) --active_count[st.cls];
  }

  for (bin_id b = 0; b < p.bin_count(); ++b) {
    const auto& items = p[b].items;
    const int c = tr.bin_class[b];
    std::size_t own = 0, ones = 0;
    for (item_index it : items) {
      const int ic = classify(inst[it], M);
      if (ic == c) ++own;
      const bool special = no_ones ? ic == 1 : ic == 0;
      if (special && ic != c) ++ones;
    }
    const bool ends_special = !items.empty() && (no_ones ? classify(inst[items.back()], M) == 1 : inst.is_one(items.back()));
    switch (tr.kind[b]) {
      case bin_kind::one:
        if (items.size() != 1 || !inst.is_one(items[0])) return "class-0 bin " + std::to_string(b) + " malformed";
        break;
      case bin_kind::pair:
        if (items.size() > 2 || own != items.size()) return "pair bin " + std::to_string(b) + " malformed";
        break;
      case bin_kind::large:
        if (c < M && own > static_cast<std::size_t>(c) + 1) return "large bin " + std::to_string(b) + " overfull";
        if (ones != 0) return "large bin " + std::to_string(b) + " received a 1-item";
        break;
      case bin_kind::small:
        if (c < M && own > static_cast<std::size_t>(c)) return "small bin " + std::to_string(b) + " overfull";
        if (ones > 1) return "small bin " + std::to_string(b) + " has two 1-items";
        if (tr.used_at[b] != algorithm_trace::never) {
          if (!ends_special || items.back() != tr.used_at[b]) return "used bin " + std::to_string(b) + " does not end with its 1-item";
        } else if (ones != 0) {
          return "ready bin " + std::to_string(b) + " holds a 1-item";
        }
        break;
    }
  }
  return std::nullopt;
}

}  // namespace ooebp

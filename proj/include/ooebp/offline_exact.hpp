#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ooebp/core.hpp"
#include "ooebp/online.hpp"

namespace ooebp {

struct solver_limits {
  std::size_t max_items = 20;
  std::uint64_t node_budget = 10'000'000;
};

/// The node budget ran out. Carries the best packing cost found and the
/// root lower bound.
class budget_exceeded : public std::runtime_error {
 public:
  budget_exceeded(std::size_t best, std::size_t lower)
      : std::runtime_error("node budget exceeded (best found " + std::to_string(best) + ", lower bound " +
                           std::to_string(lower) + ")"),
        best_(best),
        lower_(lower) {}
  [[nodiscard]] std::size_t best_found() const noexcept { return best_; }
  [[nodiscard]] std::size_t lower_bound() const noexcept { return lower_; }

 private:
  std::size_t best_;
  std::size_t lower_;
};

class instance_too_large : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct exact_result {
  std::size_t cost = 0;
  packing witness;
  std::uint64_t nodes = 0;
};

namespace detail {

class exact_search {
 public:
  exact_search(const instance& inst, const solver_limits& limits) : inst_(inst), limits_(limits) {
    suffix_.assign(inst.size() + 1, rational(0));
    for (std::size_t i = inst.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + inst[i];
    assign_.assign(inst.size(), 0);
  }

  exact_result run() {
    const packing nf = next_fit(inst_);
    best_ = nf.cost();
    best_assign_.assign(inst_.size(), 0);
    for (item_index i = 0; i < inst_.size(); ++i) best_assign_[i] = nf.bin_of(i);
    root_lower_ = bound(0, 0, {});
    if (best_ > root_lower_) dfs(0, 0);
    exact_result r;
    r.cost = best_;
    r.nodes = nodes_;
    r.witness = rebuild(best_assign_);
    return r;
  }

 private:
  struct open_bin {
    rational load;
    std::uint32_t id;
  };

  [[nodiscard]] std::size_t bound(std::size_t t, std::size_t opened, const std::vector<open_bin>& open) const {
    rational room;
    for (const auto& b : open) room += rational(2) - b.load;
    const rational excess = suffix_[t] - room;
    std::size_t extra = 0;
    if (excess > rational(0)) extra = static_cast<std::size_t>((excess / rational(2)).ceil());
    return opened + extra;
  }

  std::string key(std::size_t t) const {
    std::vector<rational> loads;
    loads.reserve(open_.size());
    for (const auto& b : open_) loads.push_back(b.load);
    std::sort(loads.begin(), loads.end());
    std::string k = std::to_string(t);
    for (const auto& l : loads) {
      k += ';';
      k += std::to_string(l.num());
      k += '/';
      k += std::to_string(l.den());
    }
    return k;
  }

  void dfs(std::size_t t, std::size_t opened) {
    if (++nodes_ > limits_.node_budget) throw budget_exceeded(best_, root_lower_);
    if (t == inst_.size()) {
      if (opened < best_) {
        best_ = opened;
        best_assign_ = assign_;
      }
      return;
    }
    if (bound(t, opened, open_) >= best_) return;
    {
      auto [it, inserted] = seen_.try_emplace(key(t), opened);
      if (!inserted) {
        if (it->second <= opened) return;
        it->second = opened;
      }
    }

    const rational& s = inst_[t];
    // Fuller bins first; equal loads are interchangeable.
    std::vector<std::size_t> order(open_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (open_[a].load != open_[b].load) return open_[a].load > open_[b].load;
      return open_[a].id < open_[b].id;
    });
    for (std::size_t j = 0; j < order.size(); ++j) {
      if (j > 0 && open_[order[j]].load == open_[order[j - 1]].load) continue;
      const std::size_t pos = order[j];
      const open_bin saved = open_[pos];
      assign_[t] = saved.id;
      const rational next = saved.load + s;
      if (next >= rational(1)) {
        open_.erase(open_.begin() + static_cast<std::ptrdiff_t>(pos));
        dfs(t + 1, opened);
        open_.insert(open_.begin() + static_cast<std::ptrdiff_t>(pos), saved);
      } else {
        open_[pos].load = next;
        dfs(t + 1, opened);
        open_[pos].load = saved.load;
      }
      if (best_ <= root_lower_) return;
    }
    // New bin last.
    const auto id = static_cast<std::uint32_t>(opened);
    assign_[t] = id;
    if (s >= rational(1)) {
      dfs(t + 1, opened + 1);
    } else {
      open_.push_back({s, id});
      dfs(t + 1, opened + 1);
      open_.pop_back();
    }
  }

  packing rebuild(const std::vector<std::uint32_t>& assign) const {
    std::uint32_t count = 0;
    for (auto b : assign) count = std::max(count, b + 1);
    std::vector<std::vector<item_index>> contents(count);
    for (item_index i = 0; i < assign.size(); ++i) contents[assign[i]].push_back(i);
    std::erase_if(contents, [](const auto& c) { return c.empty(); });
    return packing::from_bins(inst_, contents);
  }

  const instance& inst_;
  solver_limits limits_;
  std::vector<rational> suffix_;
  std::vector<open_bin> open_;
  std::vector<std::uint32_t> assign_;
  std::vector<std::uint32_t> best_assign_;
  std::unordered_map<std::string, std::size_t> seen_;
  std::size_t best_ = 0;
  std::size_t root_lower_ = 0;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Minimum number of bins over all sequentially feasible packings, with a
/// witness. Branch-and-bound with state memoization.
inline exact_result optimal_cost(const instance& inst, const solver_limits& limits = {}) {
  if (inst.size() > limits.max_items) {
    throw instance_too_large("exact solver: " + std::to_string(inst.size()) + " items exceeds the cap of " +
                             std::to_string(limits.max_items));
  }
  return detail::exact_search(inst, limits).run();
}

/// Plain enumeration of all set partitions in canonical order. n <= 10.
inline std::size_t optimal_cost_bruteforce(const instance& inst) {
  const std::size_t n = inst.size();
  if (n > 10) throw instance_too_large("brute force solver accepts at most 10 items");
  if (n == 0) return 0;
  std::vector<std::size_t> label(n, 0);  // restricted growth string
  std::size_t best = n;
  while (true) {
    std::size_t blocks = 0;
    for (auto l : label) blocks = std::max(blocks, l + 1);
    std::vector<rational> load(blocks);
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (load[label[i]] >= rational(1)) ok = false;
      load[label[i]] += inst[i];
    }
    if (ok) best = std::min(best, blocks);
    // Advance to the next restricted growth string.
    std::size_t i = n;
    while (i-- > 1) {
      std::size_t prefix_max = 0;
      for (std::size_t j = 0; j < i; ++j) prefix_max = std::max(prefix_max, label[j]);
      if (label[i] <= prefix_max) {
        ++label[i];
        std::fill(label.begin() + static_cast<std::ptrdiff_t>(i) + 1, label.end(), 0);
        break;
      }
    }
    if (i == 0 || i == static_cast<std::size_t>(-1)) break;
  }
  return best;
}

}  // namespace ooebp

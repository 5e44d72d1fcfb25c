#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ooebp/rational.hpp"

namespace ooebp {

using item_index = std::uint32_t;
using bin_id = std::uint32_t;

inline constexpr bin_id no_bin = std::numeric_limits<bin_id>::max();

/// An ordered sequence of item sizes in (0, 1]. Position is significant: an
/// item can only join a bin after every item already in it.
class instance {
 public:
  instance() = default;
  explicit instance(std::vector<rational> sizes) {
    sizes_.reserve(sizes.size());
    for (auto& s : sizes) push_back(s);
  }
  instance(std::initializer_list<rational> sizes) : instance(std::vector<rational>(sizes)) {}

  /// Sizes of at least 1 all behave identically and are stored as exactly 1.
  void push_back(rational size) {
    if (size <= rational(0)) throw std::invalid_argument("size must be positive");
    if (size > rational(1)) size = rational(1);
    if (sizes_.size() >= std::numeric_limits<item_index>::max()) throw std::length_error("instance too large");
    sizes_.push_back(size);
  }

  void reserve(std::size_t n) { sizes_.reserve(n); }

  [[nodiscard]] std::size_t size() const noexcept { return sizes_.size(); }
  [[nodiscard]] bool empty() const noexcept { return sizes_.empty(); }
  [[nodiscard]] const rational& operator[](std::size_t i) const { return sizes_[i]; }
  [[nodiscard]] std::span<const rational> sizes() const noexcept { return sizes_; }
  [[nodiscard]] bool is_one(std::size_t i) const { return sizes_[i] == rational(1); }
  [[nodiscard]] bool has_one_items() const {
    return std::any_of(sizes_.begin(), sizes_.end(), [](const rational& s) { return s == rational(1); });
  }

  [[nodiscard]] auto begin() const noexcept { return sizes_.begin(); }
  [[nodiscard]] auto end() const noexcept { return sizes_.end(); }

  friend bool operator==(const instance&, const instance&) = default;

 private:
  std::vector<rational> sizes_;
};

struct bin {
  std::vector<item_index> items;  // arrival order
  rational load;

  [[nodiscard]] bool empty() const noexcept { return items.empty(); }
};

/// A bin still accepts items while its load is strictly below 1.
inline bool bin_can_accept(const bin& b) { return b.load < rational(1); }

/// The exceeding item of a bin is its highest-index item, defined only when
/// the load reached 1.
inline std::optional<item_index> exceeding_item(const bin& b) {
  if (b.load < rational(1) || b.items.empty()) return std::nullopt;
  return *std::max_element(b.items.begin(), b.items.end());
}

/// Assignment of items to bins. Built incrementally with open_bin/place;
/// feasibility is checked separately by validate_packing.
class packing {
 public:
  packing() = default;
  explicit packing(std::size_t item_count) : item_to_bin_(item_count, no_bin) {}

  /// Builds a packing from explicit bin contents (0-based item indices) in the
  /// given order. Intended for tests and reconstruction; nothing is checked.
  static packing from_bins(const instance& inst, const std::vector<std::vector<item_index>>& contents) {
    packing p(inst.size());
    for (const auto& items : contents) {
      const bin_id b = p.open_bin();
      for (item_index i : items) p.place(b, i, inst[i]);
    }
    return p;
  }

  bin_id open_bin() {
    bins_.emplace_back();
    return static_cast<bin_id>(bins_.size() - 1);
  }

  void place(bin_id b, item_index item, const rational& size) {
    if (item >= item_to_bin_.size()) item_to_bin_.resize(static_cast<std::size_t>(item) + 1, no_bin);
    bin& target = bins_.at(b);
    target.items.push_back(item);
    target.load += size;
    item_to_bin_[item] = b;
  }

  [[nodiscard]] const std::vector<bin>& bins() const noexcept { return bins_; }
  [[nodiscard]] const bin& operator[](bin_id b) const { return bins_[b]; }
  [[nodiscard]] const std::vector<bin_id>& item_to_bin() const noexcept { return item_to_bin_; }
  [[nodiscard]] bin_id bin_of(item_index i) const { return item_to_bin_.at(i); }
  [[nodiscard]] std::size_t bin_count() const noexcept { return bins_.size(); }

  /// Number of non-empty bins.
  [[nodiscard]] std::size_t cost() const {
    return static_cast<std::size_t>(std::count_if(bins_.begin(), bins_.end(), [](const bin& b) { return !b.empty(); }));
  }

 private:
  std::vector<bin> bins_;
  std::vector<bin_id> item_to_bin_;
};

inline std::size_t packing_cost(const packing& p) { return p.cost(); }

struct packing_violation {
  enum class kind {
    unknown_item,
    duplicate_item,
    missing_item,
    order,
    overfilled,
    load_mismatch,
    map_mismatch,
  };
  kind what;
  std::optional<bin_id> bin;
  std::optional<item_index> item;
  std::string message;
};

/// Checks that every item is packed exactly once, indices increase within
/// every bin, and each bin's load without its last item is below 1.
/// Returns the first violation found, scanning bins in order.
inline std::optional<packing_violation> validate_packing(const instance& inst, const packing& p) {
  using kind = packing_violation::kind;
  const std::size_t n = inst.size();
  std::vector<bin_id> seen(n, no_bin);
  auto fail = [](kind k, std::optional<bin_id> b, std::optional<item_index> i, const std::string& msg) {
    return std::optional<packing_violation>(packing_violation{k, b, i, msg});
  };
  for (bin_id b = 0; b < p.bins().size(); ++b) {
    const bin& cur = p.bins()[b];
    rational prefix;  // load before the current item
    for (std::size_t pos = 0; pos < cur.items.size(); ++pos) {
      const item_index it = cur.items[pos];
      std::ostringstream where;
      where << "bin " << b << ", item " << it;
      if (it >= n) return fail(kind::unknown_item, b, it, where.str() + ": index out of range");
      if (seen[it] != no_bin) return fail(kind::duplicate_item, b, it, where.str() + ": item packed twice");
      seen[it] = b;
      if (pos > 0 && cur.items[pos - 1] >= it) return fail(kind::order, b, it, where.str() + ": indices not increasing");
      if (prefix >= rational(1)) return fail(kind::overfilled, b, it, where.str() + ": bin already had load >= 1");
      prefix += inst[it];
    }
    if (prefix != cur.load) return fail(kind::load_mismatch, b, std::nullopt, "bin " + std::to_string(b) + ": cached load differs");
  }
  for (item_index i = 0; i < n; ++i) {
    if (seen[i] == no_bin) return fail(kind::missing_item, std::nullopt, i, "item " + std::to_string(i) + " not packed");
    if (i < p.item_to_bin().size() && p.item_to_bin()[i] != seen[i]) {
      return fail(kind::map_mismatch, seen[i], i, "item " + std::to_string(i) + ": item_to_bin disagrees with bin contents");
    }
  }
  if (p.item_to_bin().size() < n) return fail(kind::map_mismatch, std::nullopt, std::nullopt, "item_to_bin is not total");
  return std::nullopt;
}

}  // namespace ooebp

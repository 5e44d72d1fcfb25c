#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ooebp/core.hpp"
#include "ooebp/params.hpp"

namespace ooebp {

/// Generator parameters outside the family's domain.
class invalid_family_params : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct batch {
  std::int64_t count = 0;
  rational size;
};

using batch_plan = std::vector<batch>;

inline std::int64_t plan_items(const batch_plan& plan) {
  std::int64_t n = 0;
  for (const auto& b : plan) n = detail::checked_add(n, b.count);
  return n;
}

/// Expands a plan into an instance. Refuses plans above max_items.
inline instance materialize(const batch_plan& plan, std::int64_t max_items = 50'000'000) {
  const std::int64_t n = plan_items(plan);
  if (n > max_items) {
    throw invalid_family_params("plan has " + std::to_string(n) + " items, above the cap of " + std::to_string(max_items));
  }
  instance inst;
  inst.reserve(static_cast<std::size_t>(n));
  for (const auto& b : plan) {
    for (std::int64_t i = 0; i < b.count; ++i) inst.push_back(b.size);
  }
  return inst;
}

/// Start index of every batch, plus the total at the end.
inline std::vector<item_index> batch_offsets(const batch_plan& plan) {
  std::vector<item_index> off{0};
  for (const auto& b : plan) off.push_back(off.back() + static_cast<item_index>(b.count));
  return off;
}

namespace detail {

inline std::int64_t lcm64(std::int64_t a, std::int64_t b) {
  return checked_mul(a / gcd(a, b), b);
}

inline std::int64_t pow_int(std::int64_t base, int e) {
  std::int64_t v = 1;
  for (int i = 0; i < e; ++i) v = checked_mul(v, base);
  return v;
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw invalid_family_params(msg);
}

// Helper assembling bins from item indices; items are sorted per bin.
struct bin_builder {
  std::vector<std::vector<item_index>> bins;
  std::vector<item_index>& add() { return bins.emplace_back(); }
  packing finish(const instance& inst) {
    for (auto& b : bins) std::sort(b.begin(), b.end());
    return packing::from_bins(inst, bins);
  }
};

}  // namespace detail

// ---------------------------------------------------------------- Next Fit

/// 4N items alternating 1 - 1/(2N) and 1/(2N).
inline instance gen_nf_tight(std::int64_t N) {
  detail::require(N >= 1, "nf_tight: N must be at least 1");
  const std::int64_t M = 2 * N;
  instance inst;
  inst.reserve(static_cast<std::size_t>(4 * N));
  for (std::int64_t i = 0; i < 2 * N; ++i) {
    inst.push_back(rational(M - 1, M));
    inst.push_back(rational(1, M));
  }
  return inst;
}

/// N bins with two large items each, one bin with every small item.
inline packing construct_nf_tight_opt(const instance& inst) {
  detail::bin_builder bb;
  const auto n = static_cast<item_index>(inst.size());
  for (item_index i = 0; i + 2 < n; i += 4) bb.add() = {i, i + 2};
  auto& smalls = bb.add();
  for (item_index i = 1; i < n; i += 2) smalls.push_back(i);
  return bb.finish(inst);
}

/// 2N items of size 1/2 followed by 2(M'-1)N items of size 1/M', M' = 2N^2.
inline batch_plan plan_nf2_tight(std::int64_t N) {
  detail::require(N >= 1, "nf2_tight: N must be at least 1");
  const std::int64_t Mp = 2 * N * N;
  return {{2 * N, rational(1, 2)}, {2 * (Mp - 1) * N, rational(1, Mp)}};
}

inline instance gen_nf2_tight(std::int64_t N) { return materialize(plan_nf2_tight(N)); }

/// Pairs of halves, then Next Fit over the small items: 3N bins.
inline packing construct_nf2_tight_opt(const instance& inst, std::int64_t N) {
  detail::bin_builder bb;
  const auto halves = static_cast<item_index>(2 * N);
  for (item_index i = 0; i < halves; i += 2) bb.add() = {i, i + 1};
  const auto per_bin = static_cast<item_index>(2 * N * N);
  for (item_index i = halves; i < inst.size(); i += per_bin) {
    auto& b = bb.add();
    for (item_index j = i; j < std::min<item_index>(i + per_bin, static_cast<item_index>(inst.size())); ++j) b.push_back(j);
  }
  return bb.finish(inst);
}

// ------------------------------------------------------- four-item batches

/// N batches of eps, 2i eps, 1 - 2i eps, 1 with eps = 2^-N.
inline instance gen_sec4_batches(int N) {
  detail::require(N >= 3 && N <= 60, "sec4_batches: N must be in [3, 60]");
  const std::int64_t d = std::int64_t{1} << N;
  instance inst;
  for (std::int64_t i = 1; i <= N; ++i) {
    inst.push_back(rational(1, d));
    inst.push_back(rational(2 * i, d));
    inst.push_back(rational(d - 2 * i, d));
    inst.push_back(rational(1));
  }
  return inst;
}

/// Packing of the prefix that ends just before the 1-item of batch i
/// (1-based), using i bins.
inline std::pair<instance, packing> construct_sec4_prefix_opt(const instance& full, int i) {
  const int N = static_cast<int>(full.size() / 4);
  detail::require(i >= 1 && i <= N, "sec4 prefix: batch out of range");
  auto item = [](int batch, int pos) { return static_cast<item_index>(4 * (batch - 1) + pos); };  // pos 0..3
  instance prefix(std::vector<rational>(full.begin(), full.begin() + 4 * (i - 1) + 3));
  detail::bin_builder bb;
  if (i == 1) {
    bb.add() = {item(1, 0), item(1, 1), item(1, 2)};
  } else {
    bb.add() = {item(1, 0), item(1, 2), item(1, 3)};
    for (int j = 2; j < i; ++j) bb.add() = {item(j - 1, 1), item(j, 0), item(j, 2), item(j, 3)};
    bb.add() = {item(i - 1, 1), item(i, 0), item(i, 1), item(i, 2)};
  }
  return {prefix, bb.finish(prefix)};
}

/// Packing of the whole input with N + 1 bins.
inline packing construct_sec4_opt(const instance& full) {
  const int N = static_cast<int>(full.size() / 4);
  auto [prefix, p] = construct_sec4_prefix_opt(full, N);
  std::vector<std::vector<item_index>> bins;
  for (const auto& b : p.bins()) bins.push_back(b.items);
  bins.push_back({static_cast<item_index>(full.size() - 1)});
  return packing::from_bins(full, bins);
}

// ------------------------------------------- bad example, class algorithm

/// Smallest N step for which every batch count of the t-sequence example
/// with parameter g is integral, and the per-class item counts divide
/// evenly into bins: lcm of t_i (t_i - 1) for i <= g, and 3.
inline std::int64_t sec5_multiplier(int g) {
  detail::require(g >= 2 && g <= 3, "sec5_bad: g must be 2 or 3");
  const auto t = t_sequence(g);
  std::int64_t m = 3;
  for (auto ti : t) m = detail::lcm64(m, detail::checked_mul(ti, ti - 1));
  return m;
}

inline batch_plan plan_sec5_bad(std::int64_t N, int g = 2) {
  const std::int64_t step = sec5_multiplier(g);
  detail::require(N > 0 && N % step == 0, "sec5_bad: N must be a positive multiple of " + std::to_string(step));
  const auto t = t_sequence(g);
  batch_plan plan;
  for (int i = g - 1; i >= 0; --i) plan.push_back({N / (t[i] - 1), rational(1, t[i])});
  plan.push_back({N / 3, rational(1, 7)});
  plan.push_back({N, rational(1, 3)});
  plan.push_back({N, rational(1, 2)});
  plan.push_back({N, rational(1)});
  for (int i = g - 1; i >= 0; --i) plan.push_back({N, rational(1, t[i])});
  plan.push_back({2 * N, rational(1, 7)});
  plan.push_back({2 * N, rational(1, 3)});
  plan.push_back({N, rational(1, 2)});
  return plan;
}

inline instance gen_sec5_bad(std::int64_t N, int g = 2) { return materialize(plan_sec5_bad(N, g)); }

/// 2N bins: the first N take one item of the first g + 1 batches each and a
/// third, a half and a 1-item; the other N take one item of every t-size,
/// two sevenths, two thirds and finally a half.
inline packing construct_sec5_opt(const instance& inst, std::int64_t N, int g = 2) {
  const batch_plan plan = plan_sec5_bad(N, g);
  const auto off = batch_offsets(plan);
  const auto n = static_cast<item_index>(N);
  detail::bin_builder bb;
  bb.bins.resize(static_cast<std::size_t>(2 * N));
  item_index slot = 0;
  for (int b = 0; b <= g; ++b) {
    for (item_index j = off[b]; j < off[b + 1]; ++j) bb.bins[slot++].push_back(j);
  }
  for (int b = g + 1; b <= g + 3; ++b) {
    for (item_index j = 0; j < n; ++j) bb.bins[j].push_back(off[b] + j);
  }
  const int second = g + 4;
  for (item_index j = 0; j < n; ++j) {
    auto& bin = bb.bins[n + j];
    for (int b = second; b < second + g; ++b) bin.push_back(off[b] + j);
    bin.push_back(off[second + g] + 2 * j);
    bin.push_back(off[second + g] + 2 * j + 1);
    bin.push_back(off[second + g + 1] + 2 * j);
    bin.push_back(off[second + g + 1] + 2 * j + 1);
    bin.push_back(off[second + g + 2] + j);
  }
  return bb.finish(inst);
}

// ----------------------------------------- bad example without 1-items

/// N must be a multiple of lcm(225, 25, 41) so that batches two to four are
/// integral; the first batch is rounded down.
inline constexpr std::int64_t sec6_multiplier = 9225;

inline batch_plan plan_sec6_bad(std::int64_t N) {
  detail::require(N > 0 && N % sec6_multiplier == 0, "sec6_bad: N must be a positive multiple of 9225");
  return {
      {12 * N / 90901, rational(1, 90903)}, {2 * N / 450, rational(1, 452)}, {12 * N / 300, rational(1, 302)},
      {80 * N / 41, rational(1, 43)},       {16 * N, rational(1, 7)},        {16 * N, rational(1, 3)},
      {32 * N, rational(1, 2)},             {6 * N, rational(1, 90903)},     {N, rational(1, 452)},
      {6 * N, rational(1, 302)},            {40 * N, rational(1, 43)},       {40 * N, rational(1, 7)},
      {8 * N, rational(1, 3)},
  };
}

inline instance gen_sec6_bad(std::int64_t N) { return materialize(plan_sec6_bad(N)); }

/// 23N bins.
inline packing construct_sec6_opt(const instance& inst, std::int64_t N) {
  const auto off = batch_offsets(plan_sec6_bad(N));
  const auto n = static_cast<item_index>(N);
  detail::bin_builder bb;
  bb.bins.resize(static_cast<std::size_t>(23 * N));
  item_index slot = 0;
  for (int b = 0; b < 4; ++b) {
    for (item_index j = off[b]; j < off[b + 1]; ++j) bb.bins[slot++].push_back(j);
  }
  for (item_index j = 0; j < 16 * n; ++j) {
    auto& bin = bb.bins[j];
    bin.push_back(off[4] + j);
    bin.push_back(off[5] + j);
    bin.push_back(off[6] + j);
    bin.push_back(off[6] + 16 * n + j);
  }
  for (item_index j = 0; j < n; ++j) {
    auto& bin = bb.bins[16 * n + j];
    bin.push_back(off[8] + j);
    for (item_index r = 0; r < 4; ++r) {
      bin.push_back(off[10] + 4 * j + r);
      bin.push_back(off[11] + 4 * j + r);
    }
    bin.push_back(off[12] + 2 * j);
    bin.push_back(off[12] + 2 * j + 1);
  }
  for (item_index j = 0; j < 6 * n; ++j) {
    auto& bin = bb.bins[17 * n + j];
    bin.push_back(off[7] + j);
    bin.push_back(off[9] + j);
    for (item_index r = 0; r < 6; ++r) {
      bin.push_back(off[10] + 4 * n + 6 * j + r);
      bin.push_back(off[11] + 4 * n + 6 * j + r);
    }
    bin.push_back(off[12] + 2 * n + j);
  }
  return bb.finish(inst);
}

// ------------------------------------------------ powers-of-seven inputs

enum class seven_kind { I, J3, J2, J22, J1 };

struct seven_power_params {
  int N = 0;
  std::int64_t M = 0;

  /// lcm of 7^N - 1 + 7^(N-k) over 1 <= k <= N, and 48.
  static std::int64_t required_divisor(int N) {
    detail::require(N >= 1 && N <= 10, "seven-power: N must be in [1, 10]");
    std::int64_t l = 48;
    const std::int64_t p = detail::pow_int(7, N);
    for (int k = 1; k <= N; ++k) l = detail::lcm64(l, p - 1 + detail::pow_int(7, N - k));
    return l;
  }

  static seven_power_params minimal(int N) { return {N, required_divisor(N)}; }

  void validate() const {
    const std::int64_t d = required_divisor(N);
    detail::require(M > 0 && M % d == 0, "seven-power: M must be a positive multiple of " + std::to_string(d));
  }

  /// M'_k = M * Theta_k / (1 - mu + theta_k).
  [[nodiscard]] std::int64_t m_prime(int k) const {
    detail::require(k >= 1 && k <= N, "seven-power: k out of range");
    const std::int64_t geometric = (detail::pow_int(7, N - k + 1) - 1) / 6;
    const std::int64_t denom = detail::pow_int(7, N) - 1 + detail::pow_int(7, N - k);
    const auto value = static_cast<__int128>(M) * geometric;
    if (value % denom != 0) throw invalid_family_params("M'_k is not integral");
    return static_cast<std::int64_t>(value / denom);
  }
};

inline batch_plan plan_seven_power(seven_kind kind, const seven_power_params& sp, int k = 1) {
  sp.validate();
  if (kind != seven_kind::I) k = 1;
  detail::require(k >= 1 && k <= sp.N, "seven-power: k must be in [1, N]");
  batch_plan plan;
  for (int i = sp.N; i >= k; --i) plan.push_back({sp.M, rational(1, detail::pow_int(7, i))});
  if (kind == seven_kind::I) return plan;
  plan.push_back({sp.M, rational(1, 3)});
  if (kind == seven_kind::J3) return plan;
  plan.push_back({kind == seven_kind::J22 ? 2 * sp.M : sp.M, rational(1, 2)});
  if (kind == seven_kind::J1) plan.push_back({sp.M, rational(1)});
  return plan;
}

inline instance gen_seven_power(seven_kind kind, const seven_power_params& sp, int k = 1) {
  return materialize(plan_seven_power(kind, sp, k));
}

inline packing construct_seven_power_opt(const instance& inst, seven_kind kind, const seven_power_params& sp, int k = 1) {
  const batch_plan plan = plan_seven_power(kind, sp, k);
  const auto off = batch_offsets(plan);
  const int N = sp.N;
  const std::int64_t M = sp.M;
  // batch index of size 1/7^i within the plan
  auto seven_batch = [&](int i) { return N - i; };
  detail::bin_builder bb;

  if (kind == seven_kind::I) {
    const std::int64_t mp = sp.m_prime(k);
    bb.bins.resize(static_cast<std::size_t>(mp));
    // six items of every finer size per bin
    std::vector<item_index> next(off.begin(), off.end() - 1);
    for (int i = k + 1; i <= N; ++i) {
      const int b = seven_batch(i);
      for (std::int64_t j = 0; j < mp; ++j) {
        for (int r = 0; r < 6; ++r) bb.bins[j].push_back(next[b]++);
      }
    }
    // blocks of total size 1/7^k, assigned 7^k - 1 per bin
    std::vector<std::vector<item_index>> blocks;
    for (int i = k + 1; i <= N; ++i) {
      const int b = seven_batch(i);
      const std::int64_t per = detail::pow_int(7, i - k);
      while (next[b] < off[b + 1]) {
        auto& blk = blocks.emplace_back();
        for (std::int64_t r = 0; r < per; ++r) blk.push_back(next[b]++);
      }
    }
    const int kb = seven_batch(k);
    for (std::int64_t j = 0; j < M - mp; ++j) blocks.push_back({next[kb]++});
    const std::int64_t per_bin = detail::pow_int(7, k) - 1;
    if (static_cast<std::int64_t>(blocks.size()) != per_bin * mp) throw std::logic_error("seven-power: block count mismatch");
    for (std::size_t bl = 0; bl < blocks.size(); ++bl) {
      auto& bin = bb.bins[bl / static_cast<std::size_t>(per_bin)];
      bin.insert(bin.end(), blocks[bl].begin(), blocks[bl].end());
    }
    for (std::int64_t j = 0; j < mp; ++j) bb.bins[j].push_back(next[kb]++);
    return bb.finish(inst);
  }

  // A block holds the j-th item of every 1/7^i batch.
  auto add_block = [&](std::vector<item_index>& bin, std::int64_t j) {
    for (int i = 1; i <= N; ++i) bin.push_back(off[seven_batch(i)] + static_cast<item_index>(j));
  };
  const item_index three = off[N];
  std::int64_t block = 0;
  if (kind == seven_kind::J3) {
    item_index t3 = three;
    for (std::int64_t j = 0; j < M / 8; ++j) {
      auto& bin = bb.add();
      for (int r = 0; r < 4; ++r) add_block(bin, block++);
      bin.push_back(t3++);
    }
    for (std::int64_t j = 0; j < M / 4; ++j) {
      auto& bin = bb.add();
      for (int r = 0; r < 2; ++r) add_block(bin, block++);
      bin.push_back(t3++);
      bin.push_back(t3++);
    }
    for (auto& bin : bb.bins) bin.push_back(t3++);
    return bb.finish(inst);
  }
  const item_index two = off[N + 1];
  if (kind == seven_kind::J2) {
    item_index t3 = three, t2 = two;
    for (std::int64_t j = 0; j < M / 3; ++j) {
      auto& bin = bb.add();
      add_block(bin, block++);
      bin.push_back(t3++);
      bin.push_back(t2++);
    }
    for (std::int64_t j = 0; j < M / 3; ++j) {
      auto& bin = bb.add();
      add_block(bin, block++);
      add_block(bin, block++);
      bin.push_back(t3++);
      bin.push_back(t3++);
    }
    for (auto& bin : bb.bins) bin.push_back(t2++);
    return bb.finish(inst);
  }
  // J22 and J1: M bins of block, third, half, then the final item.
  const item_index last = kind == seven_kind::J22 ? two + static_cast<item_index>(M) : off[N + 2];
  for (std::int64_t j = 0; j < M; ++j) {
    auto& bin = bb.add();
    add_block(bin, j);
    bin.push_back(three + static_cast<item_index>(j));
    bin.push_back(two + static_cast<item_index>(j));
    bin.push_back(last + static_cast<item_index>(j));
  }
  return bb.finish(inst);
}

// ------------------------------------------------------ family dispatch

enum class family {
  nf_tight,
  nf2_tight,
  sec4_batches,
  sec5_bad,
  sec5_bad_general,
  sec6_bad,
  Ik,
  J3,
  J2,
  J22,
  J1,
};

struct family_spec {
  family id = family::nf_tight;
  std::int64_t N = 1;
  std::int64_t M = 0;  // seven-power families; 0 selects the minimal value
  int k = 1;
  int g = 2;
};

inline std::string family_name(family f) {
  switch (f) {
    case family::nf_tight: return "nf_tight";
    case family::nf2_tight: return "nf2_tight";
    case family::sec4_batches: return "sec4_batches";
    case family::sec5_bad: return "sec5_bad";
    case family::sec5_bad_general: return "sec5_bad_general";
    case family::sec6_bad: return "sec6_bad";
    case family::Ik: return "Ik";
    case family::J3: return "J3";
    case family::J2: return "J2";
    case family::J22: return "J22";
    case family::J1: return "J1";
  }
  return "?";
}

inline family parse_family(const std::string& name) {
  for (int f = 0; f <= static_cast<int>(family::J1); ++f) {
    if (family_name(static_cast<family>(f)) == name) return static_cast<family>(f);
  }
  throw invalid_family_params("unknown family: " + name);
}

inline seven_power_params seven_params_of(const family_spec& s) {
  detail::require(s.N >= 1 && s.N <= 10, "seven-power: N must be in [1, 10]");
  const int N = static_cast<int>(s.N);
  return {N, s.M == 0 ? seven_power_params::required_divisor(N) : s.M};
}

inline seven_kind seven_kind_of(family f) {
  switch (f) {
    case family::J3: return seven_kind::J3;
    case family::J2: return seven_kind::J2;
    case family::J22: return seven_kind::J22;
    case family::J1: return seven_kind::J1;
    default: return seven_kind::I;
  }
}

inline bool is_seven_power(family f) {
  return f == family::Ik || f == family::J3 || f == family::J2 || f == family::J22 || f == family::J1;
}

inline instance generate(const family_spec& s) {
  switch (s.id) {
    case family::nf_tight: return gen_nf_tight(s.N);
    case family::nf2_tight: return gen_nf2_tight(s.N);
    case family::sec4_batches: return gen_sec4_batches(static_cast<int>(s.N));
    case family::sec5_bad: return gen_sec5_bad(s.N, 2);
    case family::sec5_bad_general: return gen_sec5_bad(s.N, s.g);
    case family::sec6_bad: return gen_sec6_bad(s.N);
    default: return gen_seven_power(seven_kind_of(s.id), seven_params_of(s), s.k);
  }
}

/// The packing given by the construction for the family.
inline packing constructive_opt(const family_spec& s, const instance& inst) {
  switch (s.id) {
    case family::nf_tight: return construct_nf_tight_opt(inst);
    case family::nf2_tight: return construct_nf2_tight_opt(inst, s.N);
    case family::sec4_batches: return construct_sec4_opt(inst);
    case family::sec5_bad: return construct_sec5_opt(inst, s.N, 2);
    case family::sec5_bad_general: return construct_sec5_opt(inst, s.N, s.g);
    case family::sec6_bad: return construct_sec6_opt(inst, s.N);
    default: return construct_seven_power_opt(inst, seven_kind_of(s.id), seven_params_of(s), s.k);
  }
}

}  // namespace ooebp

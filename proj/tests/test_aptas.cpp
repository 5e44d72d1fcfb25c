#include <gtest/gtest.h>

#include "ooebp/aptas.hpp"
#include "ooebp/offline_exact.hpp"
#include "ooebp/random.hpp"

using namespace ooebp;

namespace {

scheme_params toy() {
  scheme_params sp;
  sp.eps = rational(1, 3);
  sp.intervals = 3;
  sp.groups = 3;
  sp.small_threshold = rational(1, 9);
  return sp;
}

std::int64_t ip_cost_by_counts(const conf_model& m, const conf_ip_solution& s) {
  std::vector<std::int64_t> got(m.components.size(), 0), cover(m.cover.size(), 0);
  std::int64_t total = 0;
  for (std::size_t c = 0; c < m.configs.size(); ++c) {
    total += s.x[c];
    for (std::size_t j = 0; j < got.size(); ++j) got[j] += s.x[c] * m.configs[c].large[j];
    for (std::size_t i = 0; i < cover.size(); ++i) cover[i] += s.x[c] * m.configs[c].small[i];
  }
  for (std::size_t j = 0; j < got.size(); ++j) EXPECT_EQ(got[j], m.components[j].demand);
  for (std::size_t i = 0; i < cover.size(); ++i) EXPECT_GE(cover[i], m.cover[i]);
  return total;
}

}  // namespace

TEST(SchemeParams, Defaults) {
  scheme_params sp;
  EXPECT_EQ(sp.interval_count(), 3);
  EXPECT_EQ(sp.group_count(), 27);
  EXPECT_EQ(sp.threshold(), rational(1, 9));
  EXPECT_EQ(sp.quantum(), rational(1, 27));
  sp.eps = rational(1, 2);
  EXPECT_THROW(sp.validate(), std::invalid_argument);
}

TEST(Certificates, Enumeration) {
  scheme_params sp;
  EXPECT_EQ(enumerate_certificates(1, sp), (std::vector<certificate>{{0, 1, 1, 1}}));
  EXPECT_EQ(enumerate_certificates(2, sp), (std::vector<certificate>{{0, 1, 1, 2}, {0, 1, 2, 2}, {0, 2, 2, 2}}));
  // Count check: monotone (e1, e2) with 1 <= e1 <= e2 <= n.
  for (std::size_t n = 1; n <= 12; ++n) {
    const auto certs = enumerate_certificates(n, sp);
    EXPECT_EQ(certs.size(), n * (n + 1) / 2);
    EXPECT_NE(std::find(certs.begin(), certs.end(), certificate{0, n, n, n}), certs.end());
  }
  EXPECT_THROW(enumerate_certificates(0, sp), std::invalid_argument);
}

TEST(Padding, InsertsBeforeLastItem) {
  scheme_params sp;  // 27 groups
  const instance inst{rational(1, 2), rational(1, 20), rational(1, 3)};
  const padded_instance p = pad_with_dummies(inst, {0, 1, 1, 3}, sp);
  // interval 0: one large item -> 26 dummies before it
  // interval 2: items 1..2, one large -> 26 dummies before item 2
  EXPECT_EQ(p.dummies, 52u);
  EXPECT_EQ(p.inst.size(), 55u);
  EXPECT_TRUE(p.dummy[0]);
  EXPECT_FALSE(p.dummy[26]);
  EXPECT_EQ(p.original[26], 0);
  EXPECT_EQ(p.original[27], 1);
  EXPECT_TRUE(p.dummy[28]);
  EXPECT_EQ(p.original[54], 2);
  EXPECT_EQ(p.cert, (certificate{0, 27, 27, 55}));
  EXPECT_LE(p.dummies, 81u);
}

TEST(Padding, NoDummiesWhenDivisible) {
  const scheme_params sp = toy();
  const instance inst(std::vector<rational>(6, rational(1, 2)));
  const padded_instance p = pad_with_dummies(inst, {0, 3, 6, 6}, sp);
  EXPECT_EQ(p.dummies, 0u);
  EXPECT_EQ(p.inst, inst);
}

TEST(Grouping, RoundsUpWithinGroups) {
  const scheme_params sp = toy();
  // Seven large items: two dummy 1-items complete the three groups.
  const instance inst{rational(1, 5), rational(1, 2), rational(1, 3), rational(1, 20), rational(1, 30),
                      rational(1, 4), rational(2, 3), rational(1, 7), rational(3, 4)};
  const padded_instance p = pad_with_dummies(inst, {0, 9, 9, 9}, sp);
  EXPECT_EQ(p.dummies, 2u);
  const auto g = linear_grouping(p, sp);
  ASSERT_EQ(g[0].groups.size(), 3u);
  EXPECT_EQ(g[0].rounded, (std::vector<rational>{rational(1), rational(2, 3), rational(1, 4)}));
  EXPECT_EQ(g[0].sigma, rational(1, 20) + rational(1, 30));
  EXPECT_TRUE(g[1].groups.empty());
  const instance up = rounded_instance(p, g);
  const instance down = reduced_instance(p, g);
  EXPECT_EQ(up.size(), 11u);
  EXPECT_EQ(down.size(), 8u);
  for (std::size_t j = 0; j < up.size(); ++j) EXPECT_GE(up[j], p.inst[j]);
}

TEST(Grouping, EqualSizes) {
  const scheme_params sp = toy();
  const instance inst(std::vector<rational>(6, rational(2, 5)));
  const auto g = linear_grouping(pad_with_dummies(inst, {0, 6, 6, 6}, sp), sp);
  for (const auto& s : g[0].rounded) EXPECT_EQ(s, rational(2, 5));
}

TEST(Configurations, FeasibilityRules) {
  const std::vector<ip_component> comps{{0, 0, rational(1), 2}, {1, 0, rational(1, 2), 2}};
  auto feasible = [&](std::vector<std::int64_t> large, std::vector<std::int64_t> small) {
    return configuration_feasible({std::move(large), std::move(small)}, comps, rational(1, 27), 3);
  };
  EXPECT_TRUE(feasible({0, 0}, {0, 0, 0}));
  EXPECT_TRUE(feasible({1, 0}, {0, 0, 0}));
  EXPECT_FALSE(feasible({2, 0}, {0, 0, 0}));
  // A 1-item of interval 0 before a half of interval 1 leaves load 1 before the last item.
  EXPECT_FALSE(feasible({1, 1}, {0, 0, 0}));
  // Two large items in the last nonempty interval: no unique item at i_max.
  EXPECT_FALSE(feasible({0, 2}, {0, 0, 0}));
  // Half of interval 0, then a 1-item of interval 1.
  const std::vector<ip_component> rev{{0, 0, rational(1, 2), 2}, {1, 0, rational(1), 2}};
  auto feasible_rev = [&](std::vector<std::int64_t> large, std::vector<std::int64_t> small) {
    return configuration_feasible({std::move(large), std::move(small)}, rev, rational(1, 27), 3);
  };
  EXPECT_TRUE(feasible_rev({1, 1}, {0, 0, 0}));
  EXPECT_TRUE(feasible_rev({1, 1}, {1, 0, 0}));
  // Small volume at or after i_max.
  EXPECT_FALSE(feasible_rev({1, 1}, {0, 1, 0}));
  EXPECT_FALSE(feasible_rev({1, 1}, {14, 0, 0}));
  EXPECT_TRUE(feasible({0, 1}, {13, 0, 0}));
  EXPECT_FALSE(feasible({0, 1}, {27, 0, 0}));
}

TEST(Configurations, EnumerationMatchesFilter) {
  const std::vector<ip_component> comps{{0, 0, rational(1, 2), 3}, {0, 1, rational(1, 3), 3}, {2, 0, rational(1), 1}};
  const std::vector<std::int64_t> cover{2, 0, 0};
  const auto configs = enumerate_configurations(comps, cover, rational(1, 27), 3);
  std::size_t expected = 0;
  for (std::int64_t a = 0; a <= 3; ++a)
    for (std::int64_t b = 0; b <= 3; ++b)
      for (std::int64_t c = 0; c <= 1; ++c)
        for (std::int64_t s = 0; s <= 2; ++s) expected += configuration_feasible({{a, b, c}, {s, 0, 0}}, comps, rational(1, 27), 3);
  EXPECT_EQ(configs.size(), expected);
  EXPECT_THROW(enumerate_configurations(comps, cover, rational(1, 27), 3, 5), configuration_cap_exceeded);
}

TEST(ConfIp, TrivialAndSmallModels) {
  conf_model zero;
  zero.intervals = 1;
  zero.quantum = rational(1, 27);
  zero.cover = {0};
  zero.configs = {{{}, {0}}};
  EXPECT_EQ(solve_conf_ip(zero).cost, 0);
  EXPECT_EQ(solve_conf_ip_bruteforce(zero), 0);

  conf_model m;
  m.intervals = 1;
  m.quantum = rational(1, 27);
  m.components = {{0, 0, rational(2, 5), 3}};
  m.cover = {0};
  m.configs = {{{1}, {0}}, {{2}, {0}}};
  const conf_ip_solution s = solve_conf_ip(m);
  EXPECT_EQ(s.cost, 2);
  EXPECT_EQ(ip_cost_by_counts(m, s), 2);
  EXPECT_EQ(solve_conf_ip_bruteforce(m), 2);

  m.configs = {{{2}, {0}}};
  EXPECT_THROW(solve_conf_ip(m), infeasible_model);
  EXPECT_THROW(solve_conf_ip_bruteforce(m), infeasible_model);
}

TEST(ConfIp, AgreesWithBruteForceOnRandomModels) {
  instance_sampler rs(1357);
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    conf_model m;
    m.intervals = static_cast<int>(rs.uniform(1, 3));
    m.quantum = rational(1, 27);
    std::int64_t total = 0;
    const auto comps = rs.uniform(1, 4);
    for (std::uint64_t j = 0; j < comps && total < 10; ++j) {
      const auto d = static_cast<std::int64_t>(rs.uniform(1, std::min<std::uint64_t>(4, 10 - total)));
      const rational size(static_cast<std::int64_t>(rs.uniform(1, 6)), 6);
      m.components.push_back({static_cast<int>(rs.uniform(0, m.intervals - 1)), static_cast<int>(j), size, d});
      total += d;
    }
    for (int i = 0; i < m.intervals; ++i) m.cover.push_back(static_cast<std::int64_t>(rs.uniform(0, 1) ? rs.uniform(0, 30) : 0));
    m.configs = enumerate_configurations(m.components, m.cover, m.quantum, m.intervals);
    const conf_ip_solution s = solve_conf_ip(m);
    EXPECT_EQ(ip_cost_by_counts(m, s), s.cost);
    ASSERT_EQ(s.cost, solve_conf_ip_bruteforce(m)) << t;
    ++checked;
  }
  EXPECT_EQ(checked, 200);
}

TEST(ConfIp, BruteForceGuard) {
  conf_model m;
  m.intervals = 1;
  m.quantum = rational(1, 27);
  m.components = {{0, 0, rational(1, 5), 25}};
  m.cover = {0};
  m.configs = {{{1}, {0}}};
  EXPECT_THROW(solve_conf_ip_bruteforce(m), std::invalid_argument);
}

TEST(PostProcess, SingleOneItem) {
  const scheme_params sp = toy();
  const aptas_result r = run_aptas(instance{rational(1)}, sp);
  EXPECT_EQ(r.best.cost(), 1u);
  EXPECT_EQ(run_aptas(instance{}, sp).best.cost(), 0u);
}

TEST(PostProcess, ConfigurationsInstantiateWithRealItems) {
  // Every configuration filled with the largest real items of its groups
  // packs validly in index order.
  const scheme_params sp = toy();
  instance_sampler rs(8080);
  for (int t = 0; t < 10; ++t) {
    const instance inst = rs.fractions(rs.uniform(3, 9), 12);
    run_aptas(inst, sp, [&](const aptas_guess& g) {
      for (const auto& cfg : g.model.configs) {
        std::vector<item_index> items;
        for (std::size_t j = 0; j < g.model.components.size(); ++j) {
          const auto& grp = g.grouped[g.model.components[j].interval].groups[g.model.components[j].group];
          for (std::int64_t r = 0; r < cfg.large[j]; ++r) items.push_back(grp[r]);
        }
        std::sort(items.begin(), items.end());
        rational before;
        for (std::size_t k = 0; k + 1 < items.size(); ++k) before += g.padded.inst[items[k]];
        rational small_total;
        for (std::size_t i = 0; i < cfg.small.size(); ++i) small_total += g.model.quantum * rational(cfg.small[i]);
        // The small volume sits in intervals before the exceeding item or the
        // whole bin is below 1.
        ASSERT_LT(before + (items.empty() ? rational(0) : rational(0)), rational(1) + rational(1));
        rational all = small_total;
        for (auto it : items) all += g.padded.inst[it];
        if (all >= rational(1)) ASSERT_LT(before + small_total, rational(1));
      }
    });
  }
}

TEST(RunAptas, OutputValidAndAboveOptimum) {
  const scheme_params sp = toy();
  instance_sampler rs(4242);
  for (int t = 0; t < 25; ++t) {
    const instance inst = rs.fractions(rs.uniform(1, 10), 12);
    std::size_t guesses = 0;
    const aptas_result r = run_aptas(inst, sp, [&](const aptas_guess& g) {
      ++guesses;
      ASSERT_FALSE(validate_packing(g.padded.inst, g.packed.padded));
      ASSERT_FALSE(validate_packing(inst, g.packed.original));
      for (const auto& b : g.packed.padded.bins()) {
        std::size_t exceeding = 0;
        rational load;
        for (auto it : b.items) {
          if (load >= rational(1)) ++exceeding;
          load += g.padded.inst[it];
        }
        EXPECT_EQ(exceeding, 0u);
      }
      const rational bound = (rational(1) + sp.eps) * rational(g.solution.cost) + rational(1) / sp.eps;
      EXPECT_LE(rational(static_cast<std::int64_t>(g.packed.padded_bins)), bound);
    });
    EXPECT_EQ(guesses, inst.size() * (inst.size() + 1) / 2);
    ASSERT_FALSE(validate_packing(inst, r.best));
    EXPECT_GE(r.best.cost(), optimal_cost(inst).cost);
  }
  const instance halves{rational(1, 2), rational(1, 2), rational(1, 2)};
  EXPECT_GE(run_aptas(halves, sp).best.cost(), 2u);
}

TEST(RunAptas, TieBreakIsFirstCertificate) {
  const scheme_params sp = toy();
  const instance inst{rational(1, 2), rational(1, 2)};
  std::optional<certificate> first_best;
  std::size_t best = 1000;
  run_aptas(inst, sp, [&](const aptas_guess& g) {
    if (g.packed.original.cost() < best) {
      best = g.packed.original.cost();
      first_best = g.cert;
    }
  });
  EXPECT_EQ(run_aptas(inst, sp).best_cert, *first_best);
}

TEST(Rounding, Sandwich) {
  const scheme_params sp = toy();
  instance_sampler rs(606);
  for (int t = 0; t < 40; ++t) {
    const instance inst = rs.fractions(rs.uniform(1, 8), 12);
    const auto certs = enumerate_certificates(inst.size(), sp);
    const certificate& cert = certs[rs.uniform(0, certs.size() - 1)];
    const padded_instance p = pad_with_dummies(inst, cert, sp);
    if (p.inst.size() > 10) continue;
    const auto g = linear_grouping(p, sp);
    const std::size_t mid = optimal_cost_bruteforce(p.inst);
    EXPECT_LE(optimal_cost_bruteforce(reduced_instance(p, g)), mid);
    EXPECT_LE(mid, optimal_cost_bruteforce(rounded_instance(p, g)));
  }
}

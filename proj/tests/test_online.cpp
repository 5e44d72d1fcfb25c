#include <gtest/gtest.h>

#include <map>

#include "ooebp/analysis.hpp"
#include "ooebp/online.hpp"
#include "ooebp/random.hpp"

using namespace ooebp;

namespace {

// Straightforward re-statement of the class algorithm used as an oracle:
// bins are scanned linearly instead of using per-class slots and an ordered
// ready set. Returns the bin contents.
std::vector<std::vector<item_index>> reference_class_algorithm(const instance& inst, const class_params& params,
                                                               bool no_ones) {
  struct ref_bin {
    int cls;
    bool small;
    bool active;
    bool ready;
    bool pair;
    std::vector<item_index> items;
    rational load;
    std::size_t own = 0;
  };
  std::vector<ref_bin> bins;
  std::map<int, std::pair<std::size_t, std::size_t>> counts;  // class -> (small, large)
  const int M = params.M;
  for (item_index t = 0; t < inst.size(); ++t) {
    const rational s = inst[t];
    int c;
    if (s == rational(1)) {
      c = 0;
    } else if (s < rational(1, M)) {
      c = M;
    } else {
      c = 1;
      while (!(s >= rational(1, c + 1))) ++c;
    }
    const bool special = no_ones ? c == 1 : c == 0;
    if (special) {
      std::optional<std::size_t> pick;
      for (std::size_t b = 0; b < bins.size(); ++b) {
        if (!bins[b].ready) continue;
        if (!pick || bins[b].cls < bins[*pick].cls) pick = b;
      }
      if (!pick && no_ones) {
        for (std::size_t b = 0; b < bins.size(); ++b) {
          if (bins[b].pair && bins[b].items.size() == 1) pick = b;
        }
      }
      if (!pick) {
        bins.push_back({c, false, false, false, no_ones, {}, rational(0)});
        pick = bins.size() - 1;
      }
      bins[*pick].ready = false;
      bins[*pick].items.push_back(t);
      bins[*pick].load += s;
      continue;
    }
    std::optional<std::size_t> act;
    for (std::size_t b = 0; b < bins.size(); ++b) {
      if (bins[b].active && bins[b].cls == c) act = b;
    }
    if (!act) {
      auto& [ns, nl] = counts[c];
      const wide_rational beta = params.beta[c];
      const bool small = wide_rational(static_cast<__int128>(ns)) <= beta * wide_rational(static_cast<__int128>(ns + nl));
      (small ? ns : nl)++;
      bins.push_back({c, small, true, false, false, {}, rational(0)});
      act = bins.size() - 1;
    }
    ref_bin& b = bins[*act];
    b.items.push_back(t);
    b.load += s;
    ++b.own;
    bool full;
    if (c < M) {
      full = b.own == static_cast<std::size_t>(b.small ? c : c + 1);
    } else {
      full = b.small ? b.load >= rational(1) - rational(1, M) : b.load >= rational(1);
    }
    if (full) {
      b.active = false;
      b.ready = b.small;
    }
  }
  std::vector<std::vector<item_index>> out;
  for (auto& b : bins) out.push_back(b.items);
  return out;
}

std::vector<std::vector<item_index>> contents(const packing& p) {
  std::vector<std::vector<item_index>> out;
  for (const auto& b : p.bins()) out.push_back(b.items);
  return out;
}

}  // namespace

TEST(Classify, Boundaries) {
  const int M = 10;
  EXPECT_EQ(classify(rational(1), M), 0);
  EXPECT_EQ(classify(rational(99, 100), M), 1);
  EXPECT_EQ(classify(rational(1, 2), M), 1);
  EXPECT_EQ(classify(rational(49, 100), M), 2);
  EXPECT_EQ(classify(rational(1, 3), M), 2);
  EXPECT_EQ(classify(rational(1, 10), M), 9);
  EXPECT_EQ(classify(rational(1, 11), M), 10);
  EXPECT_EQ(classify(rational(1, 1000), M), 10);
  EXPECT_EQ(classify(rational(3, 29), M), 9);
}

TEST(NextFit, OpenEnd) {
  const instance inst{rational(1, 2), rational(1, 2), rational(1, 2)};
  const packing p = next_fit(inst);
  EXPECT_EQ(p.cost(), 2u);
  EXPECT_FALSE(validate_packing(inst, p));
  const instance ones{rational(1), rational(1), rational(1, 5)};
  EXPECT_EQ(next_fit(ones).cost(), 3u);
}

TEST(Nf2, SeparatesStreamsAndRejectsOnes) {
  const instance inst{rational(1, 2), rational(1, 4), rational(3, 4), rational(1, 4)};
  const packing p = nf2(inst);
  EXPECT_FALSE(validate_packing(inst, p));
  EXPECT_EQ(p.cost(), 2u);
  EXPECT_EQ(p.bin_of(0), p.bin_of(2));
  EXPECT_EQ(p.bin_of(1), p.bin_of(3));
  EXPECT_THROW(nf2(instance{rational(1, 2), rational(1)}), unsupported_input);
}

TEST(ClassAlgorithm, OneItemUsesReadyBin) {
  const class_params p = default_params_with_ones(10);
  const instance inst{rational(1, 2), rational(1)};
  const class_run run = class_algorithm(inst, p);
  EXPECT_EQ(run.result.cost(), 1u);
  EXPECT_EQ(run.trace.steps[0].event, item_event::opened_small);
  EXPECT_EQ(run.trace.steps[1].event, item_event::into_ready);
  EXPECT_FALSE(check_class_trace(inst, run, p, false));
}

TEST(ClassAlgorithm, BetaExtremes) {
  const instance inst(std::vector<rational>(9, rational(1, 3)));
  const class_run large = class_algorithm(inst, class_params::uniform(10, wide_rational(0)));
  EXPECT_EQ(large.result.cost(), 3u);  // three items per large class-2 bin
  const class_run small = class_algorithm(inst, class_params::uniform(10, wide_rational(1)));
  EXPECT_EQ(small.result.cost(), 5u);  // two per small bin
  for (bin_id b = 0; b < small.result.bin_count(); ++b) EXPECT_EQ(small.trace.kind[b], bin_kind::small);
}

TEST(ClassAlgorithm, OpeningRuleAlternates) {
  // beta = 1/2: small, large, small, large, ... (n_s <= n/2)
  const instance inst(std::vector<rational>(20, rational(1, 3)));
  const class_run run = class_algorithm(inst, class_params::uniform(10, wide_rational(1, 2)));
  std::vector<bin_kind> kinds(run.trace.kind.begin(), run.trace.kind.end());
  ASSERT_GE(kinds.size(), 4u);
  EXPECT_EQ(kinds[0], bin_kind::small);
  EXPECT_EQ(kinds[1], bin_kind::large);
  EXPECT_EQ(kinds[2], bin_kind::small);
  EXPECT_EQ(kinds[3], bin_kind::large);
}

TEST(ClassAlgorithm, ReadyBinPriority) {
  // A class-2 ready bin opened later still beats an older class-3 one.
  class_params p = class_params::uniform(10, wide_rational(1));
  const instance inst{rational(1, 4), rational(1, 4), rational(1, 4), rational(1, 3), rational(1, 3), rational(1),
                      rational(1)};
  const class_run run = class_algorithm(inst, p);
  EXPECT_EQ(run.result.bin_of(5), run.result.bin_of(3));
  EXPECT_EQ(run.result.bin_of(6), run.result.bin_of(0));
  EXPECT_FALSE(check_class_trace(inst, run, p, false));
}

TEST(ClassAlgorithm, TinyThresholds) {
  const int M = 10;
  class_params small = class_params::uniform(M, wide_rational(1));
  // 1/20 items: a small tiny bin stops at load >= 9/10, i.e. after 18 items.
  const instance inst(std::vector<rational>(19, rational(1, 20)));
  const class_run a = class_algorithm(inst, small);
  EXPECT_EQ(a.result[0].items.size(), 18u);
  const class_run b = class_algorithm(inst, class_params::uniform(M, wide_rational(0)));
  EXPECT_EQ(b.result[0].items.size(), 19u);
}

TEST(ClassAlgorithm, NoOnesPairsClassOne) {
  const class_params p = default_params_no_ones(20);
  const instance inst{rational(3, 5), rational(2, 3), rational(1, 3), rational(1, 3), rational(4, 7)};
  const class_run run = class_algorithm_no_ones(inst, p);
  EXPECT_EQ(run.trace.steps[0].event, item_event::opened_pair);
  EXPECT_EQ(run.trace.steps[1].event, item_event::into_pair);
  // 1/3 items go to class 2; beta_2 < 1 with no history opens a small bin.
  EXPECT_EQ(run.trace.steps[2].event, item_event::opened_small);
  EXPECT_EQ(run.trace.steps[4].event, item_event::into_ready);
  EXPECT_EQ(run.result.cost(), 2u);
  EXPECT_FALSE(check_class_trace(inst, run, p, true));
  EXPECT_THROW(class_algorithm_no_ones(instance{rational(1)}, p), unsupported_input);
}

TEST(ClassAlgorithm, MatchesReferenceOnRandomInputs) {
  instance_sampler rs(424242);
  const class_params with = default_params_with_ones(12);
  const class_params without = default_params_no_ones(12);
  for (int t = 0; t < 300; ++t) {
    const instance inst = rs.fractions(rs.uniform(1, 60), 30);
    const class_run run = class_algorithm(inst, with);
    ASSERT_EQ(contents(run.result), reference_class_algorithm(inst, with, false)) << t;
    ASSERT_FALSE(check_class_trace(inst, run, with, false)) << *check_class_trace(inst, run, with, false);
    const instance no1 = rs.fractions(rs.uniform(1, 60), 30, false);
    const class_run r2 = class_algorithm_no_ones(no1, without);
    ASSERT_EQ(contents(r2.result), reference_class_algorithm(no1, without, true)) << t;
    ASSERT_FALSE(check_class_trace(no1, r2, without, true));
  }
}

TEST(ClassAlgorithm, TraceCheckerCatchesTampering) {
  const class_params p = default_params_with_ones(10);
  const instance inst{rational(1, 2), rational(1, 3), rational(1, 3), rational(1)};
  class_run run = class_algorithm(inst, p);
  ASSERT_FALSE(check_class_trace(inst, run, p, false));
  class_run bad = run;
  bad.trace.steps[0].event = item_event::opened_large;
  EXPECT_TRUE(check_class_trace(inst, bad, p, false));
  bad = run;
  bad.trace.steps.pop_back();
  EXPECT_TRUE(check_class_trace(inst, bad, p, false));
}

TEST(TracePartition, NoSplitItem) {
  const class_params p = default_params_with_ones(10);
  const instance a{rational(1, 3), rational(1, 4)};
  const partition_report ra = trace_partition(a, class_algorithm(a, p), p, algorithm_variant::with_ones);
  EXPECT_FALSE(ra.x.has_value());
  EXPECT_TRUE(ra.I1.empty());
  const instance b{rational(1, 2), rational(1)};
  const partition_report rb = trace_partition(b, class_algorithm(b, p), p, algorithm_variant::with_ones);
  EXPECT_FALSE(rb.x.has_value());
  EXPECT_TRUE(rb.I1.empty());
  EXPECT_EQ(rb.I2.size(), 2u);
}

TEST(TracePartition, SplitsAtLastOpenedOneItem) {
  const class_params p = default_params_with_ones(10);
  const instance inst{rational(1), rational(1, 3), rational(1), rational(1, 2), rational(1)};
  const class_run run = class_algorithm(inst, p);
  const partition_report rep = trace_partition(inst, run, p, algorithm_variant::with_ones);
  ASSERT_TRUE(rep.x.has_value());
  EXPECT_EQ(*rep.x, 2u);
  // The class-2 bin is active when x arrives and is removed.
  EXPECT_EQ(rep.I1, (std::vector<item_index>{0, 2}));
  EXPECT_EQ(rep.I2, (std::vector<item_index>{3, 4}));
  EXPECT_EQ(rep.removed_items, (std::vector<item_index>{1}));
  EXPECT_TRUE(abs(rep.W - 2) < real("1e-40"));
  const real v1 = 1 / (2 - p.beta_real[1]);
  EXPECT_TRUE(abs(rep.V - v1) < real("1e-40"));
  EXPECT_TRUE(rep.holds());
}

TEST(TracePartition, PartitionCoversAllItems) {
  instance_sampler rs(777);
  const class_params p = default_params_with_ones(12);
  for (int t = 0; t < 100; ++t) {
    const instance inst = rs.fractions(rs.uniform(1, 80), 20);
    const partition_report rep = trace_partition(inst, class_algorithm(inst, p), p, algorithm_variant::with_ones);
    EXPECT_EQ(rep.I1.size() + rep.I2.size() + rep.removed_items.size(), inst.size());
    if (rep.x) {
      for (auto i : rep.I1) EXPECT_LE(i, *rep.x);
      for (auto i : rep.I2) EXPECT_GT(i, *rep.x);
    }
    EXPECT_TRUE(rep.holds());
  }
}

#include <gtest/gtest.h>

#include <sstream>

#include "ooebp/core.hpp"
#include "ooebp/instance_io.hpp"
#include "ooebp/random.hpp"

using namespace ooebp;
using kind = packing_violation::kind;

TEST(Instance, RejectsNonPositiveAndCapsAtOne) {
  instance inst;
  EXPECT_THROW(inst.push_back(rational(0)), std::invalid_argument);
  EXPECT_THROW(inst.push_back(rational(-1, 2)), std::invalid_argument);
  inst.push_back(rational(5, 2));
  EXPECT_EQ(inst[0], rational(1));
  EXPECT_TRUE(inst.is_one(0));
  EXPECT_TRUE(inst.has_one_items());
  EXPECT_FALSE(instance({rational(1, 2)}).has_one_items());
}

TEST(Bin, AcceptsWhileBelowOne) {
  const instance inst{rational(1, 2), rational(1, 3), rational(1, 2), rational(1, 4)};
  packing p(inst.size());
  const bin_id b = p.open_bin();
  p.place(b, 0, inst[0]);
  p.place(b, 1, inst[1]);
  EXPECT_TRUE(bin_can_accept(p[b]));
  EXPECT_FALSE(exceeding_item(p[b]).has_value());
  p.place(b, 2, inst[2]);
  EXPECT_FALSE(bin_can_accept(p[b]));
  EXPECT_EQ(exceeding_item(p[b]), item_index{2});
  EXPECT_EQ(p[b].load, rational(4, 3));
}

TEST(Validate, AcceptsOpenEndBin) {
  const instance inst{rational(1, 2), rational(1, 3), rational(1)};
  const packing p = packing::from_bins(inst, {{0, 1, 2}});
  EXPECT_FALSE(validate_packing(inst, p).has_value());
  EXPECT_EQ(p.cost(), 1u);
}

TEST(Validate, DetectsEachViolation) {
  const instance inst{rational(1, 2), rational(1, 2), rational(1, 2)};
  auto kind_of = [&](const packing& p) {
    const auto v = validate_packing(inst, p);
    EXPECT_TRUE(v.has_value());
    return v ? v->what : kind::map_mismatch;
  };
  EXPECT_EQ(kind_of(packing::from_bins(inst, {{0, 1, 2}})), kind::overfilled);
  EXPECT_EQ(kind_of(packing::from_bins(inst, {{1, 0}, {2}})), kind::order);
  EXPECT_EQ(kind_of(packing::from_bins(inst, {{0, 1}})), kind::missing_item);
  EXPECT_EQ(kind_of(packing::from_bins(inst, {{0, 1}, {1}, {2}})), kind::duplicate_item);

  packing unknown(inst.size());
  const bin_id b = unknown.open_bin();
  unknown.place(b, 5, rational(1, 2));
  EXPECT_EQ(kind_of(unknown), kind::unknown_item);

  packing wrong_load(inst.size());
  for (item_index i = 0; i < 3; ++i) wrong_load.place(wrong_load.open_bin(), i, rational(1, 3));
  EXPECT_EQ(kind_of(wrong_load), kind::load_mismatch);
}

TEST(Validate, CostIgnoresEmptyBins) {
  const instance inst{rational(1, 2)};
  packing p(1);
  p.open_bin();
  p.place(p.open_bin(), 0, inst[0]);
  EXPECT_FALSE(validate_packing(inst, p).has_value());
  EXPECT_EQ(p.cost(), 1u);
  EXPECT_EQ(p.bin_count(), 2u);
}

TEST(InstanceIo, ParsesCommentsAndBlankLines) {
  const instance inst = parse_instance("# header\n1/2\n\n  2/6 \n1\n3/2\n");
  ASSERT_EQ(inst.size(), 4u);
  EXPECT_EQ(inst[1], rational(1, 3));
  EXPECT_EQ(inst[3], rational(1));
}

TEST(InstanceIo, ReportsLineNumbers) {
  try {
    parse_instance("1/2\n# c\n0/3\n");
    FAIL() << "expected parse_error";
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("size must be positive"), std::string::npos);
  }
  EXPECT_THROW(parse_instance("1/2\nabc\n"), parse_error);
  EXPECT_THROW(parse_instance("1/0\n"), parse_error);
}

TEST(InstanceIo, RoundTrip) {
  instance_sampler rs(99);
  for (int t = 0; t < 50; ++t) {
    const instance inst = rs.fractions(rs.uniform(0, 20), 15);
    EXPECT_EQ(parse_instance(format_instance(inst)), inst);
  }
}

TEST(InstanceIo, PackingText) {
  const instance inst{rational(1, 2), rational(1, 2), rational(1, 2)};
  std::ostringstream out;
  write_packing(out, packing::from_bins(inst, {{0, 1}, {2}}));
  EXPECT_EQ(out.str(), "cost 2\nbin 1: 1 2 load 1\nbin 2: 3 load 1/2\n");
}

TEST(Sampler, DeterministicAndInRange) {
  instance_sampler a(5), b(5);
  const instance x = a.fractions(200, 7, false);
  EXPECT_EQ(x, b.fractions(200, 7, false));
  for (const auto& s : x) {
    EXPECT_LT(s, rational(1));
    EXPECT_LE(s.den(), 7);
  }
  const instance u = a.unit_fractions(200, 9);
  for (const auto& s : u) EXPECT_TRUE(s == rational(1) || (s.num() == 1 && s.den() >= 2 && s.den() <= 9));
}

#include <gtest/gtest.h>

#include <random>

#include "dofnet/cuts.hpp"
#include "dofnet/dof.hpp"
#include "dofnet/error.hpp"

namespace dofnet {
namespace {

Rational R(std::int64_t p, std::int64_t q = 1) { return Rational(p, q); }

DofRegion region_of(const LayeredNetwork& net) { return build_region(net, analyze(net)); }

TEST(Rational, Formatting) {
  EXPECT_EQ(to_string(R(5, 3)), "5/3");
  EXPECT_EQ(to_string(R(4, 2)), "2");
  EXPECT_EQ(to_string(R(-1, 2)), "-1/2");
  EXPECT_EQ(parse_rational("10/4"), R(5, 2));
  EXPECT_EQ(parse_rational("-7"), R(-7));
  EXPECT_THROW(parse_rational("1/0"), ValidationError);
  EXPECT_THROW(parse_rational("x"), ValidationError);
  EXPECT_THROW(parse_rational("1/"), ValidationError);
}

TEST(Region, BottleneckThreeExact) {
  const auto region = region_of(gen_bottleneck_family(3));
  std::vector<std::string> lines;
  for (const auto& c : region.constraints) lines.push_back(describe(c));
  EXPECT_EQ(lines, (std::vector<std::string>{"D1 >= 0", "D2 >= 0", "D1 <= 1", "D2 <= 1", "3*D1 + D2 <= 3"}));
  EXPECT_EQ(region.vertices, (std::vector<DofPoint>{{R(0), R(0)}, {R(1), R(0)}, {R(2, 3), R(1)}, {R(0), R(1)}}));
  EXPECT_EQ(region.max_sum, R(5, 3));
  EXPECT_EQ(region.argmax_vertex, (DofPoint{R(2, 3), R(1)}));
  EXPECT_EQ(describe(region.constraints.back().provenance), "bottleneck w for d1, m=3");
  const auto s = in_set_S(region.max_sum);
  EXPECT_TRUE(s.member);
  EXPECT_EQ(s.k, 6);
}

TEST(Region, BottleneckTwoIsThreeHalves) { EXPECT_EQ(max_sum_dof(region_of(gen_bottleneck_family(2))), R(3, 2)); }

TEST(Region, FamilyIdentities) {
  for (int m = 1; m <= 10; ++m) {
    const Rational single = max_sum_dof(region_of(gen_bottleneck_family(m)));
    EXPECT_EQ(single, R(2) - R(1, m)) << m;
    EXPECT_EQ(in_set_S(single).k, 2 * m);
    const Rational dbl = max_sum_dof(region_of(gen_double_bottleneck_family(m)));
    EXPECT_EQ(dbl, R(2) - R(2, m + 1)) << m;
    EXPECT_EQ(in_set_S(dbl).k, m + 1);
  }
  EXPECT_EQ(max_sum_dof(region_of(gen_no_bottleneck_example())), R(2));
}

TEST(Region, CombinedBoundIdentity) {
  for (int m = 1; m <= 12; ++m) {
    std::vector<DofConstraint> cs{
        DofConstraint::upper(1, 0, 1, Extra{"box"}), DofConstraint::upper(0, 1, 1, Extra{"box"}),
        DofConstraint::upper(m, 1, m, Extra{"a"}), DofConstraint::upper(1, m, m, Extra{"b"})};
    const auto region = region_from_constraints(cs);
    EXPECT_EQ(region.max_sum, R(2 * m, m + 1)) << m;
    // for m = 1 the whole edge D1 + D2 = 1 is optimal
    if (m > 1) {
      EXPECT_EQ(region.argmax_vertex, (DofPoint{R(m, m + 1), R(m, m + 1)})) << m;
    }
  }
}

TEST(Region, DisconnectedFlowPinsDofToZero) {
  const LayeredNetwork net({{"s1", "s2"}, {"r"}, {"d1", "d2"}}, {{"s2", "r"}, {"r", "d2"}});
  const auto region = region_of(net);
  EXPECT_EQ(region.max_sum, R(1));
  EXPECT_EQ(region.argmax_vertex, (DofPoint{R(0), R(1)}));
  EXPECT_EQ(describe(region.constraints[2]), "D1 <= 0");
}

TEST(Region, RejectsUnboundedAndMalformed) {
  EXPECT_THROW(region_from_constraints({DofConstraint::upper(1, 0, 1, Extra{""})}), ValidationError);
  EXPECT_THROW(DofConstraint::upper(0, 0, 1, Extra{""}), ValidationError);
  EXPECT_THROW(DofConstraint::upper(-1, 1, 1, Extra{""}), ValidationError);
  EXPECT_THROW(DofConstraint::upper(1, 1, -1, Extra{""}), ValidationError);
}

TEST(Region, RandomPolygonsAreConsistent) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coef(0, 6);
  std::uniform_int_distribution<int> count(1, 4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<DofConstraint> cs{DofConstraint::upper(1, 0, 1, Extra{""}), DofConstraint::upper(0, 1, 1, Extra{""})};
    for (int i = count(rng); i > 0; --i) {
      int a = coef(rng), b = coef(rng);
      if (a == 0 && b == 0) a = 1;
      cs.push_back(DofConstraint::upper(a, b, coef(rng), Extra{""}));
    }
    const auto region = region_from_constraints(cs);
    ASSERT_FALSE(region.vertices.empty());
    EXPECT_EQ(region.vertices.front(), (DofPoint{R(0), R(0)}));
    for (const auto& v : region.vertices) {
      EXPECT_TRUE(region.contains(v));
      int tight = 0;
      for (const auto& c : region.constraints) tight += c.a1 * v.d1 + c.a2 * v.d2 == c.rhs ? 1 : 0;
      EXPECT_GE(tight, 2);
    }
    // counter-clockwise: consecutive turns are left turns
    const auto& vs = region.vertices;
    for (std::size_t i = 0; vs.size() >= 3 && i < vs.size(); ++i) {
      const auto& a = vs[i];
      const auto& b = vs[(i + 1) % vs.size()];
      const auto& c = vs[(i + 2) % vs.size()];
      EXPECT_GT((b.d1 - a.d1) * (c.d2 - b.d2) - (b.d2 - a.d2) * (c.d1 - b.d1), R(0));
    }
    // no feasible grid point beats max_sum
    for (int i = 0; i <= 24; ++i) {
      for (int j = 0; j <= 24; ++j) {
        const DofPoint p{R(i, 24), R(j, 24)};
        if (region.contains(p)) {
          EXPECT_LE(p.sum(), region.max_sum);
        }
      }
    }
  }
}

TEST(SetS, Membership) {
  EXPECT_EQ(in_set_S(R(0)).k, 1);
  EXPECT_EQ(in_set_S(R(1)).k, 2);
  EXPECT_EQ(in_set_S(R(4, 3)).k, 3);
  EXPECT_TRUE(in_set_S(R(2)).member);
  EXPECT_FALSE(in_set_S(R(2)).k.has_value());
  EXPECT_FALSE(in_set_S(R(17, 10)).member);
  EXPECT_FALSE(in_set_S(R(19, 12)).member);
  EXPECT_FALSE(in_set_S(R(5, 2)).member);
  EXPECT_FALSE(in_set_S(R(-1)).member);
  // witness reproduces the value: x = 2(1 - 1/k)
  for (int k = 1; k <= 40; ++k) {
    const Rational x = R(2) * (R(1) - R(1, k));
    EXPECT_EQ(in_set_S(x).k, k);
  }
}

TEST(Region, JsonShape) {
  const std::string text = serialize_region(region_of(gen_bottleneck_family(3)));
  EXPECT_NE(text.find("\"max_sum\": \"5/3\""), std::string::npos);
  EXPECT_NE(text.find("\"k\": 6"), std::string::npos);
  EXPECT_NE(text.find("\"kind\": \"bottleneck\""), std::string::npos);
}

}  // namespace
}  // namespace dofnet

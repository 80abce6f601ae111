#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "multisum/instance.hpp"
#include "test_support.hpp"

namespace multisum {
namespace {

using testing::G;
using testing::make_instance;
using testing::Q;

TEST(Catalog, LabelsRoundTripAndMapToForms) {
  for (const auto label : kAllIdentities) EXPECT_EQ(parse_identity(to_string(label)), label);
  EXPECT_FALSE(parse_identity("R9").has_value());
  EXPECT_EQ(weight_form(IdentityLabel::R5), WeightForm::Mixed);
  EXPECT_EQ(weight_form(IdentityLabel::U8), WeightForm::LinearCube);
  EXPECT_TRUE(is_restricted(IdentityLabel::R8));
  EXPECT_FALSE(is_restricted(IdentityLabel::U1));
  EXPECT_TRUE(needs_y(IdentityLabel::U5));
  EXPECT_EQ(weight_degree(WeightForm::Cube), 3u);
}

TEST(Catalog, MomentLabels) {
  const MomentLabel label{MomentKind::P12, true, {0, 1, 0}};
  EXPECT_EQ(label.name(), "M12(1,2)");
  EXPECT_EQ((MomentLabel{MomentKind::P111, false, {2, 0, 1}}).name(), "N111(3,1,2)");
  EXPECT_THROW(check_moment_label({MomentKind::P11, true, {0, 0, 0}}, 2), std::out_of_range);
  EXPECT_THROW(check_moment_label({MomentKind::P1, true, {3, 0, 0}}, 2), std::out_of_range);
  EXPECT_NO_THROW(check_moment_label({MomentKind::P111, true, {0, 1, 2}}, 3));

  EXPECT_EQ(all_moment_labels(1, true).size(), 3u);
  EXPECT_EQ(all_moment_labels(2, true).size(), 2u * 3 + 2 * 2);
  EXPECT_EQ(all_moment_labels(3, false).size(), 3u * 3 + 6 * 2 + 6);
  for (const auto& l : all_moment_labels(3, false)) EXPECT_NO_THROW(check_moment_label(l, 3));
}

TEST(Aggregates, SpecExamples) {
  const auto agg = compute_aggregates(make_instance({2, 3}, {0, 0}, {G(Q(1)), GaussianRational::i()}));
  EXPECT_EQ(agg.A(1), G(Q(2), Q(3)));
  EXPECT_EQ(agg.Aabs(), Q(5));
  EXPECT_EQ(agg.A(0), G(Q(5)));
  EXPECT_EQ(agg.A0(), 5);
  EXPECT_FALSE(agg.has_starred());
  EXPECT_THROW(agg.Astar(1), StructuralError);

  const auto s = compute_aggregates(make_instance({3}, {1}, {G(Q(2))}));
  EXPECT_EQ(s.S(1, 1), G(Q(6)));
  EXPECT_EQ(s.C0(), 1);
}

TEST(Aggregates, DefiningSums) {
  const auto inst = make_instance({2, 4, 1}, {1, 3, 0}, {G(Q(1, 2), Q(-1)), G(Q(3)), G(Q(0), Q(2, 3))}, std::nullopt,
                                  std::vector<GaussianRational>{G(Q(1)), G(Q(-2), Q(1)), G(Q(1, 4))});
  const auto agg = compute_aggregates(inst);
  for (int p = 0; p <= 3; ++p) {
    for (int q = 0; q <= 3; ++q) {
      GaussianRational a, c, s, as, cs;
      for (std::size_t i = 0; i < 3; ++i) {
        const Rational ai(inst.a[i]), ci(inst.c[i]);
        a += inst.x[i].pow(p) * ai.pow(q);
        c += inst.x[i].pow(p) * ci.pow(q);
        s += inst.x[i] * (ai.pow(p) * ci.pow(q));
        as += inst.x[i].pow(p) * (*inst.y)[i].pow(q) * ai;
        cs += inst.x[i].pow(p) * (*inst.y)[i].pow(q) * ci;
      }
      EXPECT_EQ(agg.A(p, q), a);
      EXPECT_EQ(agg.C(p, q), c);
      EXPECT_EQ(agg.S(p, q), s);
      EXPECT_EQ(agg.Astar(p, q), as);
      EXPECT_EQ(agg.Cstar(p, q), cs);
    }
  }
}

TEST(Aggregates, StarredReductions) {
  SeededStream stream(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = random_instance(mix_seed(99, trial), {});
    inst.y = inst.x;
    auto agg = compute_aggregates(inst);
    EXPECT_EQ(agg.Astar(1), agg.A(1));
    EXPECT_EQ(agg.Cstar(1), agg.C(1));
    EXPECT_EQ(agg.Astar(1, 1), agg.A(2));
    EXPECT_EQ(agg.Cstar(1, 1), agg.C(2));

    std::vector<GaussianRational> conjugates;
    for (const auto& w : inst.x) conjugates.push_back(conj(w));
    inst.y = conjugates;
    agg = compute_aggregates(inst);
    EXPECT_EQ(agg.Astar(1, 1), G(agg.Aabs()));
    EXPECT_EQ(agg.A(1) * agg.Astar(1), G(abs_squared(agg.A(1))));
  }
}

TEST(Aggregates, InvariantUnderCoordinatePermutation) {
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = random_instance(mix_seed(5, trial), {});
    std::vector<std::size_t> order(inst.size());
    std::iota(order.begin(), order.end(), 0);
    std::reverse(order.begin(), order.end());
    ProblemInstance permuted = inst;
    for (std::size_t i = 0; i < order.size(); ++i) {
      permuted.a[i] = inst.a[order[i]];
      permuted.c[i] = inst.c[order[i]];
      permuted.x[i] = inst.x[order[i]];
      (*permuted.y)[i] = (*inst.y)[order[i]];
    }
    const auto l = compute_aggregates(inst), r = compute_aggregates(permuted);
    for (int p = 0; p <= 3; ++p) {
      for (int q = 0; q <= 3; ++q) {
        EXPECT_EQ(l.A(p, q), r.A(p, q));
        EXPECT_EQ(l.C(p, q), r.C(p, q));
        EXPECT_EQ(l.S(p, q), r.S(p, q));
        EXPECT_EQ(l.Astar(p, q), r.Astar(p, q));
      }
    }
    EXPECT_EQ(l.Aabs(), r.Aabs());
    EXPECT_EQ(l.Cabs(), r.Cabs());
  }
}

TEST(Validate, ReportsStructuralProblems) {
  auto ok = make_instance({2}, {3}, {G(Q(1))});
  auto report = validate(ok);
  EXPECT_TRUE(report.ok());
  EXPECT_TRUE(report.zero_instance);

  auto short_a = make_instance({2}, {1}, {G(Q(1))});
  short_a.m = 2;
  EXPECT_FALSE(validate(short_a).ok());
  EXPECT_THROW(validate(short_a).throw_if_invalid(), StructuralError);

  auto negative = make_instance({-1}, {0}, {G(Q(1))}, 0);
  EXPECT_FALSE(validate(negative).ok());

  const auto no_y = make_instance({2}, {1}, {G(Q(1))}, 1);
  EXPECT_FALSE(validate(no_y, IdentityLabel::R5).ok());
  EXPECT_FALSE(validate(no_y, IdentityLabel::U5).ok());
  EXPECT_TRUE(validate(no_y, IdentityLabel::R3).ok());

  const auto no_n = make_instance({2}, {1}, {G(Q(1))});
  EXPECT_FALSE(validate(no_n, IdentityLabel::R1).ok());
  EXPECT_TRUE(validate(no_n, IdentityLabel::U1).ok());

  auto zero_m = make_instance({}, {}, {});
  EXPECT_FALSE(validate(zero_m).ok());
}

TEST(RandomInstance, DeterministicAndBounded) {
  EXPECT_EQ(random_instance(42, {}), random_instance(42, {}));
  EXPECT_NE(random_instance(42, {}), random_instance(43, {}));
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    EXPECT_EQ(random_instance(seed, {1, 4, WeightKind::Gaussian}).m, 1);
  }
  bool saw_over_range = false;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto inst = random_instance(seed, {3, 5, WeightKind::Rational});
    ASSERT_TRUE(validate(inst, IdentityLabel::R5).ok());
    for (std::size_t i = 0; i < inst.size(); ++i) {
      EXPECT_GE(inst.a[i], 0);
      EXPECT_LE(inst.a[i], 5);
      EXPECT_LE(inst.c[i], inst.a[i] + 1);
      saw_over_range |= inst.c[i] == inst.a[i] + 1;
      EXPECT_TRUE(inst.x[i].is_real());
      EXPECT_LE(inst.x[i].re.denominator(), 4);
    }
    EXPECT_GE(*inst.n, 0);
    EXPECT_LE(*inst.n, inst.total_a() + 1);
  }
  EXPECT_TRUE(saw_over_range);
}

TEST(SeededStream, WeightRanges) {
  SeededStream stream(1);
  for (int i = 0; i < 500; ++i) {
    const auto w = stream.weight(WeightKind::Gaussian);
    for (const auto& part : {w.re, w.im}) {
      EXPECT_LE(part, Q(4));
      EXPECT_GE(part, Q(-4));
    }
  }
  EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
  EXPECT_NE(mix_seed(1, 0), mix_seed(2, 0));
}

}  // namespace
}  // namespace multisum

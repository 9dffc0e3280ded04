#include <gtest/gtest.h>

#include "berkskel/different.hpp"
#include "berkskel/models.hpp"
#include "oracles.hpp"

using namespace berkskel;

namespace {

ErrorKind kind_of(const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

Model kummer(std::int64_t n, std::int64_t p, Rational v_p = 1) {
  return kummer_model(n, p ? ResidueCharacteristic(p) : ResidueCharacteristic(), v_p);
}

}  // namespace

TEST(BranchGerm, TrivialityAndSignConvention) {
  EXPECT_TRUE(is_delta_trivial({GermKind::off_skeleton, {}, 3, 2}));
  EXPECT_FALSE(is_delta_trivial({GermKind::off_skeleton, {}, 3, 0}));
  EXPECT_TRUE(is_delta_trivial({GermKind::off_skeleton, {}, 1, 0}));
  EXPECT_EQ(balancing_term({GermKind::off_skeleton, {}, 3, 2}), 0);
  EXPECT_EQ(balancing_term({GermKind::off_skeleton, {}, 3, 0}), 2);
  // Log-different falling outward means delta growing outward.
  EXPECT_EQ(germ_slope_from_log_slope(-2), 2);
  EXPECT_EQ(germ_slope_from_log_slope(Rational(1, 2)), Rational(-1, 2));
}

TEST(ValidateDifferent, ModelsPass) {
  for (auto [n, p] : std::vector<std::pair<int, int>>{{2, 2}, {3, 3}, {9, 3}, {6, 2}, {5, 0}}) {
    auto model = kummer(n, p);
    EXPECT_TRUE(validate_different(model.morphism, model.different, model.p).passed()) << n << " " << p;
  }
  auto tate = tate_model(3, 2);
  EXPECT_TRUE(validate_different(tate.morphism, tate.different, tate.p).passed());
}

TEST(ValidateDifferent, Failures) {
  auto model = kummer(3, 3);
  auto d = model.different;
  d.edge_profile["to_zero"] = PiecewiseAffine::affine(2, 0);
  EXPECT_TRUE(validate_different(model.morphism, d, model.p).has_check("different.continuity"));
  d = model.different;
  d.edge_profile["to_zero"] = PiecewiseAffine(1, {Rational(-1), Rational(0)}, {Rational(2)});
  EXPECT_TRUE(validate_different(model.morphism, d, model.p).has_check("different.nonnegative"));
  d = model.different;
  d.inseparability_degree["gauss"] = 2;
  EXPECT_TRUE(validate_different(model.morphism, d, model.p).has_check("different.inseparability"));
  d = model.different;
  d.vertex_value.erase("gauss");
  EXPECT_TRUE(validate_different(model.morphism, d, model.p).has_check("different.vertex_value"));
  d = model.different;
  d.listed_branches["gauss"][0].slope = 1;
  EXPECT_TRUE(validate_different(model.morphism, d, model.p).has_check("different.germ_slope"));
}

TEST(WildBalancing, KummerDegreeP) {
  auto model = kummer(3, 3);
  auto sides = wild_balance_sides(model.morphism, model.different, "gauss");
  EXPECT_EQ(sides.lhs, 4);
  EXPECT_EQ(sides.rhs, 4);
  EXPECT_TRUE(check_wild_balancing(model.morphism, model.different, "gauss").passed());
}

TEST(WildBalancing, PrimePowersAndTame) {
  for (auto [n, p] : std::vector<std::pair<int, int>>{{2, 2}, {4, 2}, {8, 2}, {27, 3}, {25, 5}, {5, 0}, {6, 5}}) {
    auto model = kummer(n, p, Rational(1, 2));
    auto sides = wild_balance_sides(model.morphism, model.different, "gauss");
    EXPECT_EQ(sides.lhs, 2 * n - 2);
    EXPECT_TRUE(sides.holds()) << n << " " << p;
  }
}

TEST(WildBalancing, TameAgreesWithTameFormula) {
  // With p not dividing n the different vanishes and every skeleton germ has
  // slope 0, so each term is n_e - 1 as in the tame formula.
  auto model = kummer(5, 0);
  auto wild = wild_balance_sides(model.morphism, model.different, "gauss");
  auto tame = tame_rh_sides(model.morphism, "gauss");
  EXPECT_EQ(wild.lhs, tame.lhs);
  EXPECT_EQ(wild.rhs, tame.rhs);
  EXPECT_EQ(wild.rhs, 8);
}

TEST(WildBalancing, IdentityMorphism) {
  auto tate = tate_model(1, 1);
  auto sides = wild_balance_sides(tate.morphism, tate.different, "y0");
  EXPECT_EQ(sides.lhs, 0);
  EXPECT_EQ(sides.rhs, 0);
}

TEST(WildBalancing, Errors) {
  auto model = kummer(3, 3);
  auto d = model.different;
  d.listed_branches["gauss"].pop_back();
  EXPECT_EQ(kind_of([&] { wild_balance_sides(model.morphism, d, "gauss"); }), ErrorKind::MissingSkeletonBranch);
  d = model.different;
  d.vertex_value["gauss"] = LogValue::infinity();
  EXPECT_EQ(kind_of([&] { wild_balance_sides(model.morphism, d, "gauss"); }), ErrorKind::InfiniteSlope);
  EXPECT_THROW(wild_balance_sides(model.morphism, model.different, "zero"), Error);
  d = model.different;
  d.listed_branches["gauss"][1].slope = 1;
  auto report = check_wild_balancing(model.morphism, d, "gauss");
  ASSERT_EQ(report.error_count(), 1u);
  EXPECT_EQ(report.entries()[0].lhs, "4");
  EXPECT_EQ(report.entries()[0].rhs, "3");
  d = model.different;
  d.generic_flag["gauss"] = false;
  EXPECT_TRUE(check_wild_balancing(model.morphism, d, "gauss").has_check("different.generic_flag"));
}

TEST(Type1Slopes, RamifiedEndsAreSkipped) {
  auto model = kummer(3, 3);
  auto check = check_type1_slopes(model.morphism, model.different, "zero", 7);
  EXPECT_TRUE(check.skipped);
  EXPECT_TRUE(check.report.passed());
  EXPECT_THROW(check_type1_slopes(model.morphism, model.different, "gauss", 0), Error);
}

TEST(Type1Slopes, UnramifiedEnds) {
  auto model = kummer(1, 3);
  auto ok = check_type1_slopes(model.morphism, model.different, "zero", 0);
  EXPECT_FALSE(ok.skipped);
  EXPECT_FALSE(ok.wild);
  EXPECT_TRUE(ok.report.passed());
  auto d = model.different;
  d.edge_profile["to_zero"] = PiecewiseAffine::affine(0, 3);
  auto bad = check_type1_slopes(model.morphism, d, "zero", 2);
  EXPECT_TRUE(bad.wild);
  ASSERT_EQ(bad.report.error_count(), 1u);
  EXPECT_EQ(bad.report.entries()[0].lhs, "3");
  EXPECT_EQ(bad.report.entries()[0].rhs, "2");
}

TEST(SkeletonCriterion, Examples) {
  auto model = kummer(3, 3);
  EXPECT_TRUE(check_skeleton_criterion(model.morphism, model.different, true));
  EXPECT_FALSE(check_skeleton_criterion(model.morphism, model.different, false));
  auto d = model.different;
  d.listed_branches["gauss"].push_back({GermKind::off_skeleton, {}, 3, 0});
  auto report = skeleton_criterion_report(model.morphism, d, true);
  EXPECT_TRUE(report.has_check("criterion.off_skeleton_branch"));
  d = model.different;
  d.listed_branches["gauss"].push_back({GermKind::off_skeleton, {}, 3, 2});
  EXPECT_TRUE(check_skeleton_criterion(model.morphism, d, true));
  d = model.different;
  d.generic_flag["gauss"] = false;
  EXPECT_TRUE(skeleton_criterion_report(model.morphism, d, true).has_check("criterion.generic_flag"));
  d = model.different;
  d.edge_profile["to_zero"] = PiecewiseAffine(1, {Rational(0), Rational(1)}, {Rational(5)});
  EXPECT_TRUE(skeleton_criterion_report(model.morphism, d, true).has_check("criterion.interior_break"));
}

TEST(GlobalRH, TelescopesOnKummer) {
  for (auto [n, p] : std::vector<std::pair<int, int>>{{2, 2}, {3, 3}, {9, 3}, {4, 0}}) {
    auto model = kummer(n, p);
    auto g = global_rh_telescoping(model.morphism, model.different);
    EXPECT_TRUE(g.telescopes()) << n;
    EXPECT_EQ(g.global_lhs, 2 * n - 2);
    EXPECT_EQ(g.type1_sum, 2 * n - 2);
  }
}

TEST(GlobalRH, TelescopesOnTate) {
  auto model = tate_model(4, Rational(3, 2));
  auto g = global_rh_telescoping(model.morphism, model.different);
  EXPECT_TRUE(g.telescopes());
  EXPECT_EQ(g.global_lhs, 0);
}

TEST(GlobalRH, SurvivesSubdivision) {
  auto rng = oracle::seeded(41);
  for (auto [n, p] : std::vector<std::pair<int, int>>{{2, 2}, {3, 3}, {9, 3}}) {
    auto model = kummer(n, p, oracle::random_positive(rng, 3));
    auto sub = subdivide_morphism(model.morphism, "to_infinity", 0, oracle::random_positive(rng, 6));
    auto d = subdivide_different(model.morphism, sub, model.different, model.p);
    EXPECT_TRUE(validate_different(sub.morphism, d, model.p).passed()) << render(validate_different(sub.morphism, d, model.p));
    for (const auto& [id, v] : sub.morphism.source.vertices()) {
      if (v.point_type == 2) EXPECT_TRUE(check_wild_balancing(sub.morphism, d, id).passed()) << id;
    }
    auto g = global_rh_telescoping(sub.morphism, d);
    EXPECT_TRUE(g.telescopes());
    EXPECT_TRUE(check_skeleton_criterion(sub.morphism, d, true));
  }
}

TEST(GlobalRH, DetectsNonTrivialOffSkeletonBranch) {
  auto model = kummer(3, 3);
  auto d = model.different;
  d.listed_branches["gauss"].push_back({GermKind::off_skeleton, {}, 1, 1});
  auto g = global_rh_telescoping(model.morphism, d);
  EXPECT_TRUE(g.regrouping_holds());
  EXPECT_FALSE(g.telescopes());
  EXPECT_EQ(g.off_skeleton_sum, -1);
}

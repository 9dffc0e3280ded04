#include <gtest/gtest.h>

#include "berkskel/models.hpp"
#include "berkskel/morphism.hpp"
#include "oracles.hpp"

using namespace berkskel;

namespace {

SkeletalMorphism identity_of(const SkeletonGraph& g) {
  SkeletalMorphism m;
  m.source = g;
  m.target = g;
  for (const auto& [id, v] : g.vertices()) {
    m.vertex_map[id] = id;
    m.vertex_multiplicity[id] = 1;
  }
  for (const auto& [id, e] : g.edges()) {
    m.edge_map[id] = {id, false};
    m.edge_multiplicity[id] = 1;
  }
  return m;
}

SkeletonGraph segment(const std::string& prefix, Rational length) {
  SkeletonGraph g;
  g.add_vertex({prefix + "a", 2, 0});
  g.add_vertex({prefix + "b", 2, 0});
  g.add_edge({prefix + "e", prefix + "a", prefix + "b", LogValue(length)});
  return g;
}

bool all_pass(const SkeletalMorphism& m) {
  return validate_structure(m).passed() && check_fiber_degree(m).passed() && check_vertex_edge_balance(m).passed();
}

}  // namespace

TEST(ValidateStructure, IdentityAndKummer) {
  auto rng = oracle::seeded(31);
  for (int i = 0; i < 20; ++i) EXPECT_TRUE(all_pass(identity_of(oracle::random_graph(rng, 5))));
  for (std::int64_t n : {1, 2, 3, 6}) EXPECT_TRUE(all_pass(make_kummer(n)));
}

TEST(ValidateStructure, MetricViolationNamesTheEdge) {
  SkeletalMorphism m;
  m.source = segment("y", 2);
  m.target = segment("x", 5);
  m.vertex_map = {{"ya", "xa"}, {"yb", "xb"}};
  m.vertex_multiplicity = {{"ya", 3}, {"yb", 3}};
  m.edge_map = {{"ye", {"xe", false}}};
  m.edge_multiplicity = {{"ye", 3}};
  m.degree = 3;
  auto report = validate_structure(m);
  ASSERT_EQ(report.error_count(), 1u);
  const auto& entry = report.entries()[0];
  EXPECT_EQ(entry.check, "morphism.metric");
  EXPECT_EQ(entry.locations[0], "ye");
  EXPECT_EQ(entry.lhs, "5");
  EXPECT_EQ(entry.rhs, "6");
}

TEST(ValidateStructure, TypeAndIncidence) {
  auto m = make_kummer(2);
  m.vertex_map["gauss"] = "zero";
  auto report = validate_structure(m);
  EXPECT_TRUE(report.has_check("morphism.type"));
  EXPECT_TRUE(report.has_check("morphism.incidence"));
  auto k = make_kummer(2);
  k.edge_map["to_zero"] = {"to_infinity", false};
  EXPECT_TRUE(validate_structure(k).has_check("morphism.incidence"));
}

TEST(FiberDegree, Examples) {
  EXPECT_TRUE(check_fiber_degree(identity_of(segment("", 1))).passed());
  EXPECT_TRUE(check_fiber_degree(make_kummer(4)).passed());
  SkeletalMorphism m;
  m.source.add_vertex({"v1", 2, 0});
  m.source.add_vertex({"v2", 2, 0});
  m.target.add_vertex({"u", 2, 0});
  m.vertex_map = {{"v1", "u"}, {"v2", "u"}};
  m.vertex_multiplicity = {{"v1", 2}, {"v2", 2}};
  m.degree = 5;
  auto report = check_fiber_degree(m);
  ASSERT_EQ(report.error_count(), 1u);
  EXPECT_EQ(report.entries()[0].lhs, "4");
  EXPECT_EQ(report.entries()[0].rhs, "5");
}

TEST(VertexEdgeBalance, Examples) {
  EXPECT_TRUE(check_vertex_edge_balance(identity_of(segment("", 1))).passed());
  EXPECT_TRUE(check_vertex_edge_balance(make_kummer(5)).passed());
  SkeletalMorphism m;
  m.source = segment("y", 1);
  m.target = segment("x", 3);
  m.vertex_map = {{"ya", "xa"}, {"yb", "xb"}};
  m.vertex_multiplicity = {{"ya", 4}, {"yb", 3}};
  m.edge_map = {{"ye", {"xe", false}}};
  m.edge_multiplicity = {{"ye", 3}};
  m.degree = 4;
  auto report = check_vertex_edge_balance(m);
  ASSERT_EQ(report.error_count(), 1u);
  EXPECT_EQ(report.entries()[0].locations[0], "ya");
}

TEST(VertexEdgeBalance, LoopsCountBothSlots) {
  // A loop folded onto itself by a reflection, and the 2-cycle over a loop.
  SkeletonGraph loop;
  loop.add_vertex({"x", 2, 0});
  loop.add_edge({"l", "x", "x", LogValue(3)});
  auto flip = identity_of(loop);
  flip.edge_map["l"].reversed = true;
  EXPECT_TRUE(all_pass(flip));
  EXPECT_TRUE(all_pass(tate_model(2, 3).morphism));
  EXPECT_TRUE(all_pass(tate_model(1, 3).morphism));
  // Reversal matters once the loop is covered by an edge between two
  // distinct vertices: both ends then land in the same target slot.
  auto cycle = tate_model(2, 3).morphism;
  cycle.edge_map["c0"].reversed = true;
  EXPECT_FALSE(check_vertex_edge_balance(cycle).passed());
}

TEST(TameLocalRH, Examples) {
  auto report = check_tame_local_rh(make_kummer(5), ResidueCharacteristic());
  EXPECT_TRUE(report.passed());
  auto sides = tame_rh_sides(make_kummer(5), "gauss");
  EXPECT_EQ(sides.lhs, 8);
  EXPECT_EQ(sides.rhs, 8);
  EXPECT_TRUE(check_tame_local_rh(identity_of(segment("", 1)), ResidueCharacteristic(2)).passed());
  try {
    check_tame_local_rh(make_kummer(4), ResidueCharacteristic(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotTame);
  }
  EXPECT_TRUE(check_tame_local_rh(make_kummer(4), ResidueCharacteristic(2), TameScope::tame_vertices_only).passed());
}

TEST(TameLocalRH, FailureCarriesBothSides) {
  auto m = make_kummer(3);
  SkeletonGraph g;
  g.add_vertex({"gauss", 2, 1});
  g.add_vertex({"zero", 1, 0});
  g.add_vertex({"infinity", 1, 0});
  g.add_edge({"to_zero", "gauss", "zero", LogValue::infinity()});
  g.add_edge({"to_infinity", "gauss", "infinity", LogValue::infinity()});
  m.source = g;
  auto report = check_tame_local_rh(m, ResidueCharacteristic());
  ASSERT_EQ(report.error_count(), 1u);
  EXPECT_EQ(report.entries()[0].lhs, "6");
  EXPECT_EQ(report.entries()[0].rhs, "4");
}

TEST(MakeKummer, Shape) {
  auto one = make_kummer(1);
  EXPECT_EQ(one, identity_of(one.source));
  auto three = make_kummer(3);
  EXPECT_EQ(three.n_vertex("gauss"), 3);
  EXPECT_EQ(three.n_edge("to_zero"), 3);
  EXPECT_EQ(three.n_edge("to_infinity"), 3);
  EXPECT_EQ(make_kummer(6).n_vertex("gauss"), 6);
  EXPECT_EQ(make_kummer(6).degree, 6);
  EXPECT_THROW(make_kummer(0), Error);
}

TEST(Compose, TowersMultiplyAndStayBalanced) {
  for (std::int64_t a : {1, 2, 3}) {
    for (std::int64_t b : {2, 5}) {
      auto m = compose(make_kummer(b), make_kummer(a));
      EXPECT_EQ(m, make_kummer(a * b));
      EXPECT_TRUE(all_pass(m));
    }
  }
  // A loop reflection composed with itself is the identity.
  SkeletonGraph loop;
  loop.add_vertex({"x", 2, 0});
  loop.add_edge({"loop", "x", "x", LogValue(1)});
  auto flip = identity_of(loop);
  flip.edge_map["loop"].reversed = true;
  EXPECT_EQ(compose(flip, flip), identity_of(loop));
  auto cover = compose(flip, tate_model(3, 1).morphism);
  EXPECT_TRUE(cover.edge_map.at("c0").reversed);
  EXPECT_TRUE(check_vertex_edge_balance(cover).passed());
}

TEST(Compose, RejectsMismatchedMiddle) {
  EXPECT_THROW(compose(tate_model(2, 1).morphism, make_kummer(2)), Error);
}

TEST(Subdivide, ValidatorsInvariant) {
  auto rng = oracle::seeded(32);
  for (std::int64_t n : {2, 3, 4}) {
    auto m = make_kummer(n);
    for (int k = 0; k < 5; ++k) {
      auto sub = subdivide_morphism(m, "to_zero", 0, oracle::random_positive(rng, 5));
      EXPECT_TRUE(validate(sub.morphism.source).passed());
      EXPECT_TRUE(all_pass(sub.morphism)) << render(validate_structure(sub.morphism));
    }
  }
  // A loop target with a two-edge cycle above it.
  auto t = tate_model(2, 4).morphism;
  auto sub = subdivide_morphism(t, "loop", 1, 1);
  EXPECT_TRUE(all_pass(sub.morphism)) << render(validate_structure(sub.morphism)) <<
      render(check_vertex_edge_balance(sub.morphism));
  EXPECT_EQ(total_genus(sub.morphism.source), total_genus(t.source));
}

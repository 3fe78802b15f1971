#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <set>

#include "feynred/builders.hpp"
#include "feynred/reduction.hpp"
#include "feynred/symanzik.hpp"
#include "support.hpp"

namespace feynred {
namespace {

using testing::schwinger_ring;

struct Symanzik {
  RingPtr ring;
  Polynomial psi, phi;
  std::vector<VarId> vars;
};

Symanzik four_point_set(Multigraph g, const std::vector<VertexId>& roots) {
  KinematicsContext k = attach_onshell_momenta(g, roots);
  Symanzik s;
  s.ring = symanzik_ring(g, k);
  s.psi = first_symanzik(g, s.ring);
  s.phi = second_symanzik(g, k, s.ring);
  s.vars = s.ring->of_kind(VariableKind::kSchwinger);
  return s;
}

class ReductionTest : public ::testing::Test {
 protected:
  RingPtr ring = Ring::make({{"a1"}, {"a2"}, {"a3"}, {"a4"}});
  Polynomial P(const char* text) const { return parse_polynomial(ring, text); }
  VarId v(int i) const { return VarId{static_cast<std::uint32_t>(i - 1)}; }
  std::vector<VarId> vars(int n) const {
    std::vector<VarId> out;
    for (int i = 1; i <= n; ++i) out.push_back(v(i));
    return out;
  }
};

TEST_F(ReductionTest, BubbleStep) {
  ReductionSet s = reduction_step(initial_set({P("a1 + a2")}), v(1));
  ASSERT_EQ(s.members.size(), 1u);
  EXPECT_EQ(s.members[0].poly, P("a2"));
  EXPECT_EQ(s.members[0].labels, (std::vector<Label>{{1, Label::kInfinity}}));
  EXPECT_EQ(s.graph.size(), 1u);
}

TEST_F(ReductionTest, TriangleStep) {
  ReductionSet s = reduction_step(initial_set({P("a1 + a2 + a3")}), v(1));
  ASSERT_EQ(s.members.size(), 1u);
  EXPECT_EQ(s.members[0].poly, P("a2 + a3"));
  EXPECT_EQ(s.graph.edge_count(), 0u);
}

TEST_F(ReductionTest, NonlinearMember) {
  ReductionSet s = initial_set({P("a1^2 + a2"), P("a3")});
  try {
    reduction_step(s, v(1));
    FAIL();
  } catch (const NotLinear& e) {
    EXPECT_EQ(e.member(), P("a1^2 + a2"));
    EXPECT_EQ(e.variable(), v(1));
  }
}

TEST_F(ReductionTest, LabelsAndEdges) {
  // f = a1*a2 + a3, f' = a1 + a4: derivatives a2 and 1, values at zero a3
  // and a4, resultant a2*a4 - a3.
  ReductionSet start = initial_set({P("a1*a2 + a3"), P("a1 + a4")});
  ASSERT_EQ(start.members.size(), 2u);
  const int f = start.members[0].poly == P("a1*a2 + a3") ? 1 : 2;
  const int f2 = 3 - f;
  ReductionSet s = reduction_step(start, v(1));
  EXPECT_EQ(s.members.size(), 4u);
  auto find = [&](const char* text) {
    for (std::size_t i = 0; i < s.members.size(); ++i)
      if (s.members[i].poly == P(text)) return i;
    ADD_FAILURE() << "missing " << text;
    return std::size_t{0};
  };
  std::size_t g1 = find("a2"), h1 = find("a3"), h2 = find("a4"), r = find("a2*a4 - a3");
  EXPECT_EQ(s.members[g1].labels, (std::vector<Label>{{0, f}}));
  EXPECT_EQ(s.members[h1].labels, (std::vector<Label>{{f, Label::kInfinity}}));
  EXPECT_EQ(s.members[h2].labels, (std::vector<Label>{{f2, Label::kInfinity}}));
  EXPECT_EQ(s.members[r].labels, (std::vector<Label>{{1, 2}}));
  EXPECT_TRUE(s.graph.adjacent(g1, h1));
  EXPECT_TRUE(s.graph.adjacent(g1, r));
  EXPECT_TRUE(s.graph.adjacent(h2, r));
  EXPECT_FALSE(s.graph.adjacent(g1, h2));
  // Both values at zero carry infinity.
  EXPECT_TRUE(s.graph.adjacent(h1, h2));
}

TEST_F(ReductionTest, DegreeZeroGetsBothLabels) {
  // a2 + a3 is free of a1, so it is its own value at zero; it is also the
  // resultant of the pair.
  ReductionSet start = initial_set({P("a2 + a3"), P("a1 + a2")});
  const int i = start.members[0].poly == P("a2 + a3") ? 1 : 2;
  ReductionSet s = reduction_step(start, v(1));
  bool seen = false;
  for (const auto& m : s.members) {
    if (m.poly != P("a2 + a3")) continue;
    seen = true;
    EXPECT_EQ(m.labels, (std::vector<Label>{{0, i}, {1, 2}, {i, Label::kInfinity}}));
  }
  EXPECT_TRUE(seen);
}

TEST_F(ReductionTest, KinematicFactorsAreConstants) {
  RingPtr k = Ring::make({{"a1"}, {"a2"}, {"s", VariableKind::kKinematic}});
  ReductionSet s = reduction_step(initial_set({parse_polynomial(k, "s*a1 + a2")}), VarId{0});
  ASSERT_EQ(s.members.size(), 1u);
  EXPECT_EQ(s.members[0].poly, parse_polynomial(k, "a2"));
  EXPECT_TRUE(initial_set({parse_polynomial(k, "s + 1")}).members.empty());
}

TEST_F(ReductionTest, SimpleReduction) {
  auto tri = simple_reduction({P("a1 + a2 + a3")}, {v(1), v(2), v(3)});
  EXPECT_TRUE(tri.completed);
  EXPECT_EQ(tri.sets.size(), 4u);
  EXPECT_TRUE(tri.sets.back().members.empty());

  auto square = simple_reduction({P("a1^2")}, {v(1), v(2)});
  EXPECT_FALSE(square.completed);
  EXPECT_EQ(square.failed_step, 1u);
  EXPECT_EQ(square.offending, P("a1^2"));

  auto absent = simple_reduction({P("a1*a2 + a1*a3")}, {v(4)});
  ASSERT_TRUE(absent.completed);
  const ReductionSet& after = absent.sets.back();
  ASSERT_EQ(after.members.size(), 2u);
  EXPECT_EQ(after.members[0].poly, P("a2 + a3"));
  EXPECT_EQ(after.members[1].poly, P("a1"));
  EXPECT_TRUE(after.graph.complete());
}

TEST_F(ReductionTest, Constants) {
  ReductionOptions keep;
  keep.keep_constants = true;
  ReductionSet s = reduction_step(initial_set({P("a1 + a2")}, keep), v(1), keep);
  ASSERT_EQ(s.members.size(), 2u);
  std::set<std::string> polys = {s.members[0].poly.to_string(), s.members[1].poly.to_string()};
  EXPECT_EQ(polys, (std::set<std::string>{"1", "1*a2"}));
  // {0,1} and {1,inf} share 1.
  EXPECT_TRUE(s.graph.adjacent(0, 1));
  EXPECT_TRUE(initial_set({P("3"), P("0")}).members.empty());
}

TEST_F(ReductionTest, BracketSets) {
  std::vector<Polynomial> set = {P("a1*a2 + a3"), P("a1 + a4")};
  auto vs = vars(4);
  auto one = bracket_set(set, vs, 0b0001);
  ASSERT_TRUE(one);
  EXPECT_TRUE(one->same_as(reduction_step(initial_set(set), v(1))));

  auto two = bracket_set(set, vs, 0b0011);
  ASSERT_TRUE(two);
  ReductionSet a = reduction_step(reduction_step(initial_set(set), v(1)), v(2));
  ReductionSet b = reduction_step(reduction_step(initial_set(set), v(2)), v(1));
  EXPECT_TRUE(two->same_as(intersect(a, b)));
}

TEST_F(ReductionTest, TriangleBracket) {
  auto all = bracket_set({P("a1 + a2 + a3")}, vars(3), 0b111);
  ASSERT_TRUE(all);
  for (const auto& m : all->members) EXPECT_FALSE(m.poly.is_constant());
  EXPECT_TRUE(fubini_is_reducible({P("a1 + a2 + a3")}, vars(3)).reducible);
}

TEST(Reducibility, CyclePsi) {
  Multigraph c = cycle_graph(4);
  auto ring = schwinger_ring(c);
  Verdict v = is_reducible({first_symanzik(c, ring)}, ring->of_kind(VariableKind::kSchwinger));
  EXPECT_TRUE(v.reducible);
  EXPECT_EQ(v.witness.size(), 4u);
  EXPECT_EQ(v.witness.front(), VarId{0});
}

TEST(Reducibility, FourCycleFourPoint) {
  Symanzik s = four_point_set(cycle_graph(4), {0, 1, 2, 3});
  EXPECT_TRUE(is_reducible({s.psi, s.phi}, s.vars).reducible);
}

// With every compatibility graph complete the order a1..a4 still stays
// linear: after a1 the only nonlinear member is quadratic in a3, and a2
// removes it (hand computation of the second step).
TEST(Reducibility, FourCycleFubiniChain) {
  Symanzik s = four_point_set(cycle_graph(4), {0, 1, 2, 3});
  ReductionOptions fubini;
  fubini.fubini = true;
  auto chain = simple_reduction({s.psi, s.phi}, s.vars, fubini);
  ASSERT_TRUE(chain.completed);
  bool quadratic_after_first = false;
  for (const auto& m : chain.sets[1].members) quadratic_after_first |= m.poly.degree(s.vars[2]) == 2;
  EXPECT_TRUE(quadratic_after_first);
  for (const auto& m : chain.sets[2].members) {
    for (VarId v : s.vars) EXPECT_LE(m.poly.degree(v), 1u);
  }
  EXPECT_TRUE(fubini_is_reducible({s.psi, s.phi}, s.vars).reducible);
}

TEST(Reducibility, CompleteGraphFourPoint) {
  Symanzik s = four_point_set(complete_graph(4), {0, 1, 2, 3});
  Verdict v = is_reducible({s.psi, s.phi}, s.vars);
  EXPECT_FALSE(v.reducible);
  EXPECT_TRUE(v.witness.empty());
}

TEST(Reducibility, SingletonModesAgree) {
  for (const Multigraph& g : {cycle_graph(3), banana_graph(3), wheel_graph(3), complete_bipartite_graph(2, 3)}) {
    auto ring = schwinger_ring(g);
    std::vector<Polynomial> s = {first_symanzik(g, ring)};
    auto vs = ring->of_kind(VariableKind::kSchwinger);
    EXPECT_EQ(is_reducible(s, vs).reducible, fubini_is_reducible(s, vs).reducible);
  }
}

TEST(Reducibility, Budget) {
  Multigraph g = complete_graph(6);
  auto ring = schwinger_ring(g);
  ReductionOptions tight;
  tight.max_variables = 10;
  EXPECT_THROW(is_reducible({first_symanzik(g, ring)}, ring->of_kind(VariableKind::kSchwinger), tight),
               ResourceLimit);
  EXPECT_TRUE(is_reducible({}, {}).reducible);
}

TEST(Reducibility, WorkersAndDiskCache) {
  Symanzik s = four_point_set(cycle_graph(4), {0, 1, 2, 3});
  auto dir = std::filesystem::temp_directory_path() / "feynred_reduction_test_cache";
  std::filesystem::remove_all(dir);
  ReductionOptions options;
  options.workers = 3;
  options.cache_dir = dir.string();
  Verdict first = is_reducible({s.psi, s.phi}, s.vars, options);
  Verdict second = is_reducible({s.psi, s.phi}, s.vars, options);
  Verdict plain = is_reducible({s.psi, s.phi}, s.vars);
  EXPECT_EQ(first.layers_from_cache, 0u);
  EXPECT_EQ(second.layers_from_cache, 3u);
  EXPECT_EQ(first.reducible, plain.reducible);
  EXPECT_EQ(first.witness, plain.witness);
  EXPECT_EQ(second.witness, plain.witness);
  EXPECT_EQ(second.subsets_defined, plain.subsets_defined);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace feynred

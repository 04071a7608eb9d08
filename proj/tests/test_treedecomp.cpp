#include <gtest/gtest.h>

#include <numeric>

#include "potts/schedule.hpp"
#include "potts/treedecomp.hpp"
#include "support.hpp"

using namespace potts;

namespace {

// The seven-bag decomposition of the example graph, central bag {2,3,4}.
TreeDecomposition example_tree() {
  TreeDecomposition td;
  td.bags = {{0, 1, 2}, {1, 2, 3}, {2, 3, 4}, {2, 4, 5}, {4, 5, 6}, {3, 4, 7}, {4, 7, 8}};
  td.tree_edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {2, 5}, {5, 6}};
  td.root = 2;
  return td;
}

const BagPlan& plan_for(const Schedule& s, int bag) {
  for (const auto& p : s.steps)
    if (p.bag == bag) return p;
  throw std::runtime_error("no such bag");
}

std::vector<Vertex> lex_order(int n) {
  std::vector<Vertex> o(static_cast<std::size_t>(n));
  std::iota(o.begin(), o.end(), 0);
  return o;
}

}  // namespace

TEST(TreeDecomposition, VerifyExample) {
  const Graph g = testkit::example_graph();
  EXPECT_TRUE(verify_decomposition(g, example_tree()).valid);

  auto missing = example_tree();
  missing.bags.erase(missing.bags.begin() + 3);
  missing.tree_edges = {{0, 1}, {1, 2}, {2, 3}, {2, 4}, {4, 5}};
  const auto check = verify_decomposition(g, missing);
  EXPECT_FALSE(check.valid);
  EXPECT_NE(check.violation.find("(5,2)"), std::string::npos) << check.violation;
}

TEST(TreeDecomposition, VerifyRunningIntersection) {
  const Graph g(3, {{0, 1}});
  TreeDecomposition td;
  td.bags = {{0, 1}, {2}, {0, 1}};
  td.tree_edges = {{0, 1}, {1, 2}};
  const auto check = verify_decomposition(g, td);
  EXPECT_FALSE(check.valid);
  EXPECT_NE(check.violation.find("not connected"), std::string::npos) << check.violation;

  td.tree_edges = {{0, 1}, {1, 2}, {2, 0}};
  EXPECT_FALSE(verify_decomposition(g, td).valid);
}

TEST(TreeDecomposition, GreedyOnTreesAndCycles) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph t = testkit::random_tree(12, seed);
    const auto td = greedy_fill_in(t);
    EXPECT_TRUE(verify_decomposition(t, td).valid);
    EXPECT_EQ(td.width(), 1);
    EXPECT_EQ(td.bags.size(), 11u);
  }
  for (int n = 3; n <= 12; ++n) {
    const Graph c = testkit::cycle_graph(n);
    const auto td = greedy_fill_in(c);
    EXPECT_TRUE(verify_decomposition(c, td).valid);
    EXPECT_EQ(td.width(), 2) << n;
  }
  EXPECT_EQ(greedy_fill_in(testkit::complete_graph(5)).bags.size(), 1u);
}

TEST(TreeDecomposition, GreedyVersusExactTreewidth) {
  const Graph g = testkit::example_graph();
  EXPECT_EQ(testkit::exact_treewidth(g), 2);
  EXPECT_LE(greedy_fill_in(g).width(), 3);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Graph r = random_planar_graph(11, seed);
    const auto td = greedy_fill_in(r);
    EXPECT_TRUE(verify_decomposition(r, td).valid);
    EXPECT_GE(td.width(), testkit::exact_treewidth(r));
  }
}

TEST(TreeDecomposition, PathDecompositionLexicographic) {
  const Graph g = testkit::example_graph();
  const auto td = path_decomposition(g, lex_order(9));
  const std::vector<std::vector<Vertex>> expect{{0, 1, 2}, {1, 2, 3}, {2, 3, 4, 5}, {3, 4, 5, 7}, {4, 5, 6, 7, 8},
                                                {5, 6, 7, 8}, {6, 7, 8}, {7, 8}, {8}};
  EXPECT_EQ(td.bags, expect);
  EXPECT_TRUE(verify_decomposition(g, td).valid);

  const auto p = path_decomposition(testkit::path_graph(3), lex_order(3));
  EXPECT_EQ(p.bags, (std::vector<std::vector<Vertex>>{{0, 1}, {1, 2}, {2}}));
  EXPECT_THROW(path_decomposition(g, lex_order(8)), InputError);
}

TEST(TreeDecomposition, PathDecompositionAlwaysValid) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Graph g = testkit::random_graph(10, 15, seed);
    std::vector<Vertex> order = lex_order(10);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    EXPECT_TRUE(verify_decomposition(g, path_decomposition(g, order)).valid);
    EXPECT_TRUE(verify_decomposition(g, decompose(g)).valid);
  }
}

TEST(TreeDecomposition, TextRoundTrip) {
  const auto td = example_tree();
  const auto text = format_decomposition(td);
  EXPECT_EQ(text.substr(0, 4), "7 3\n");
  EXPECT_EQ(parse_decomposition(text), td);
  EXPECT_EQ(parse_decomposition(text + "estimate 12345\n"), td);
  EXPECT_THROW(parse_decomposition("2 2\n0 1\n"), InputError);
}

TEST(Schedule, ExampleTreeRootedAtCentre) {
  const Graph g = testkit::example_graph();
  const auto s = build_schedule(g, example_tree(), 2);
  EXPECT_EQ(s.root, 2);
  EXPECT_EQ(s.steps.back().bag, 2);
  EXPECT_FALSE(audit_schedule(g, s).has_value()) << *audit_schedule(g, s);

  const auto& top_leaf = plan_for(s, 4);
  EXPECT_EQ(top_leaf.edge_plan, (std::vector<Edge>{{4, 6}, {6, 5}}));
  EXPECT_EQ(top_leaf.delete_set, std::vector<Vertex>{6});
  const auto& top_mid = plan_for(s, 3);
  EXPECT_EQ(top_mid.edge_plan, (std::vector<Edge>{{5, 2}, {4, 2}}));
  EXPECT_EQ(top_mid.delete_set, std::vector<Vertex>{5});

  const auto& centre = plan_for(s, 2);
  EXPECT_EQ(centre.fuse_order.size(), 3u);
  EXPECT_TRUE(centre.edge_plan.empty());
  EXPECT_EQ(centre.delete_set, (std::vector<Vertex>{2, 3, 4}));
}

TEST(Schedule, PathProcessesFirstVertex) {
  const Graph g = testkit::example_graph();
  const auto td = path_decomposition(g, lex_order(9));
  const auto s = build_schedule(g, td, 8);
  const auto& first = plan_for(s, 0);
  EXPECT_EQ(first.edge_plan, (std::vector<Edge>{{0, 2}, {0, 1}}));
  EXPECT_EQ(first.delete_set, std::vector<Vertex>{0});
  EXPECT_FALSE(audit_schedule(g, s).has_value());
}

TEST(Schedule, SingleBag) {
  const Graph k3 = testkit::triangle();
  const auto td = greedy_fill_in(k3);
  ASSERT_EQ(td.bags.size(), 1u);
  const auto s = build_schedule(k3, td);
  ASSERT_EQ(s.steps.size(), 1u);
  EXPECT_EQ(s.steps[0].edge_plan.size(), 3u);
  EXPECT_EQ(s.steps[0].delete_set, (std::vector<Vertex>{0, 1, 2}));
}

TEST(Schedule, AuditOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Graph g = seed % 2 ? random_planar_graph(15, seed) : testkit::random_graph(9, 12, seed);
    const auto td = decompose(g);
    for (int r = 0; r < static_cast<int>(td.bags.size()); ++r) {
      const auto s = build_schedule(g, td, r);
      const auto problem = audit_schedule(g, s);
      EXPECT_FALSE(problem.has_value()) << *problem;
    }
    EXPECT_FALSE(audit_schedule(g, build_schedule(g, td)).has_value());
  }
}

TEST(Schedule, AuditCatchesBrokenPlans) {
  const Graph g = testkit::example_graph();
  auto s = build_schedule(g, example_tree(), 2);
  auto dup = s;
  dup.steps[0].edge_plan.push_back(dup.steps[0].edge_plan.front());
  dup.steps[0].prune_lookahead.push_back({});
  EXPECT_TRUE(audit_schedule(g, dup).has_value());
  auto lost = s;
  lost.steps.back().delete_set.pop_back();
  EXPECT_TRUE(audit_schedule(g, lost).has_value());
}

TEST(Schedule, FusionCost) {
  const std::vector<Vertex> parent{0, 1, 2, 3};
  const std::vector<std::vector<Vertex>> d{{0, 9}, {1, 2, 3, 8}};
  EXPECT_EQ(fusion_cost(parent, d, {0, 1}), 1 + 5);   // C0*C1 + C1*C3
  EXPECT_EQ(fusion_cost(parent, d, {1, 0}), 5 + 5);   // C0*C3 + C3*C1
  EXPECT_EQ(fusion_order_optimise(parent, d), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(fusion_order_optimise(parent, {{0, 1}}), std::vector<std::size_t>{0});

  const std::vector<Vertex> centre{2, 3, 4};
  const std::vector<std::vector<Vertex>> daughters{{1, 2, 3}, {2, 4, 5}, {3, 4, 7}};
  const auto order = fusion_order_optimise(centre, daughters);
  EXPECT_EQ(fusion_cost(centre, daughters, order), 1 * 2 + 2 * 2 + 5 * 2);
}

TEST(Schedule, EstimateCost) {
  EXPECT_EQ(estimate_cost(10, 9, 9, 2, 0, true), 112);
  EXPECT_EQ(estimate_cost(4, 6, 1, 4, 0, true), 616);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = random_planar_graph(20, seed);
    const auto td = decompose(g);
    const auto s = build_schedule(g, td);
    EXPECT_GE(estimate_cost(g, td, s, false), estimate_cost(g, td, s, true));
  }
}

TEST(Schedule, AutoRootMinimisesEstimate) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = random_planar_graph(25, seed);
    const auto td = decompose(g);
    const auto best = estimate_cost(g, td, build_schedule(g, td), true);
    for (int r = 0; r < static_cast<int>(td.bags.size()); ++r)
      EXPECT_LE(best, estimate_cost(g, td, build_schedule(g, td, r), true));
  }
}

TEST(Decompose, DisconnectedGraphs) {
  const Graph g(7, {{0, 1}, {1, 2}, {0, 2}, {4, 5}});
  const auto td = decompose(g);
  EXPECT_TRUE(verify_decomposition(g, td).valid);
  EXPECT_FALSE(audit_schedule(g, build_schedule(g, td)).has_value());
  EXPECT_THROW(greedy_fill_in(g), InputError);
  const auto p = decompose(g, {true, {}});
  EXPECT_TRUE(verify_decomposition(g, p).valid);
}

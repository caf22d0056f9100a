#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "netscale/box_cover.hpp"
#include "netscale/error.hpp"
#include "netscale/renorm.hpp"
#include "test_util.hpp"

using namespace netscale;

TEST_CASE("collapsing a 4-path with two boxes leaves a single edge") {
  Graph g = testutil::path_graph(4);
  BoxCover c;
  c.l_b = 2;
  c.n_boxes = 2;
  c.assignment = {0, 0, 1, 1};
  Graph collapsed = collapse(g, c);
  CHECK(collapsed.node_count() == 2);
  CHECK(collapsed.edge_count() == 1);
}

TEST_CASE("collapsing a one-box star gives a single bare node") {
  Graph g = testutil::star_graph(10);
  BoxCover c = cover(g, 3, 0, 5);
  REQUIRE(c.n_boxes == 1);
  Graph collapsed = collapse(g, c);
  CHECK(collapsed.node_count() == 1);
  CHECK(collapsed.edge_count() == 0);
}

TEST_CASE("a 12-cycle at l_B=3 collapses to a 4-cycle") {
  Graph g = testutil::cycle_graph(12);
  BoxCover c = cover(g, 3, 11, 50);
  REQUIRE(c.n_boxes == 4);  // exhaustive minimum ceil(12/3)
  Graph collapsed = collapse(g, c);
  CHECK(collapsed.node_count() == 4);
  CHECK(collapsed.edge_count() == 4);
  for (int u = 0; u < collapsed.node_count(); ++u) {
    CHECK(collapsed.degree(u) == 2);
  }
}

TEST_CASE("collapse rejects invalid covers with a validation report") {
  Graph g = testutil::path_graph(6);
  BoxCover bad;
  bad.l_b = 2;
  bad.n_boxes = 1;
  bad.assignment.assign(6, 0);
  CHECK_THROWS_AS(collapse(g, bad), DomainError);
}

TEST_CASE("collapse preserves connectivity and matches box count") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Graph g = testutil::random_connected_graph(50, seed);
    BoxCover c = cover(g, 3, seed, 10);
    Graph collapsed = collapse(g, c);
    CHECK(collapsed.node_count() == c.n_boxes);
    CHECK(connected_components(collapsed).count == 1);
  }
}

TEST_CASE("collapse centroids average member coordinates") {
  GraphBuilder b;
  NodeMeta m0, m1;
  m0.coord = Point{0.0, 0.0};
  m1.coord = Point{2.0, 4.0};
  b.add_node("a", m0);
  b.add_node("b", m1);
  b.add_edge("a", "b");
  Graph g = b.build();
  BoxCover c;
  c.l_b = 2;
  c.n_boxes = 1;
  c.assignment = {0, 0};
  Graph collapsed = collapse(g, c);
  REQUIRE(collapsed.coord(0).has_value());
  CHECK(collapsed.coord(0)->x == doctest::Approx(1.0));
  CHECK(collapsed.coord(0)->y == doctest::Approx(2.0));
}

TEST_CASE("a 16-path flow at l_B=2 halves the node counts") {
  Graph g = testutil::path_graph(16);
  auto flows = renormalization_flow(g, 2, 5, 50);
  REQUIRE(flows.size() == 1);
  const auto& flow = flows[0];
  std::vector<int> counts;
  for (const auto& st : flow.stages) counts.push_back(st.graph.node_count());
  CHECK(counts == std::vector<int>{16, 8, 4, 2, 1});
  CHECK(flow.steps == 4);
}

TEST_CASE("single-node input needs zero steps") {
  GraphBuilder b;
  b.add_node("only");
  auto flows = renormalization_flow(b.build(), 2, 0, 5);
  REQUIRE(flows.size() == 1);
  CHECK(flows[0].steps == 0);
  CHECK(flows[0].stages.size() == 1);
}

TEST_CASE("complete graphs collapse in one step") {
  auto flows = renormalization_flow(testutil::complete_graph(9), 2, 0, 5);
  REQUIRE(flows.size() == 1);
  CHECK(flows[0].steps == 1);
}

TEST_CASE("flows terminate at one node with strictly decreasing counts") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Graph g = testutil::random_connected_graph(80, seed ^ 0xbeef);
    for (int l_b : {2, 3, 4}) {
      auto flows = renormalization_flow(g, l_b, seed, 8);
      REQUIRE(flows.size() == 1);
      const auto& stages = flows[0].stages;
      CHECK(stages.front().graph.node_count() == g.node_count());
      CHECK(stages.back().graph.node_count() == 1);
      CHECK(flows[0].steps <= g.node_count() - 1);
      for (std::size_t i = 1; i < stages.size(); ++i) {
        CHECK(stages[i].graph.node_count() <
              stages[i - 1].graph.node_count());
        CHECK(connected_components(stages[i].graph).count == 1);
      }
    }
  }
}

TEST_CASE("l_B beyond the diameter finishes in exactly one step") {
  Graph g = testutil::random_connected_graph(30, 77);
  auto flows = renormalization_flow(g, diameter(g) + 1, 1, 5);
  REQUIRE(flows.size() == 1);
  CHECK(flows[0].steps == 1);
}

TEST_CASE("disconnected input is renormalized per component") {
  Graph g = testutil::graph_from_edges(
      {{"a", "b"}, {"b", "c"}, {"x", "y"}, {"y", "z"}, {"z", "x"}});
  auto flows = renormalization_flow(g, 2, 9, 10);
  REQUIRE(flows.size() == 2);
  for (const auto& f : flows) {
    CHECK(f.stages.back().graph.node_count() == 1);
  }
}

TEST_CASE("flow is reproducible under a fixed seed") {
  Graph g = testutil::random_connected_graph(60, 13);
  auto a = renormalization_flow(g, 3, 99, 10);
  auto b = renormalization_flow(g, 3, 99, 10);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].stages.size() == b[i].stages.size());
    for (std::size_t s = 0; s < a[i].stages.size(); ++s) {
      CHECK(a[i].stages[s].graph == b[i].stages[s].graph);
    }
  }
}

TEST_CASE("correlation sweep flags degree-regular collapses") {
  Graph g = testutil::cycle_graph(24);
  auto series = correlation_vs_lb(g, 2, 4, 7, 20);
  REQUIRE(series.size() == 3);
  for (const auto& pt : series) {
    CHECK_FALSE(pt.pearson.has_value());
    CHECK_FALSE(pt.flag.empty());
  }
}

TEST_CASE("correlation sweep validates its range") {
  Graph g = testutil::path_graph(8);  // diameter 7
  CHECK_THROWS_AS(correlation_vs_lb(g, 1, 3, 0, 5), DomainError);
  CHECK_THROWS_AS(correlation_vs_lb(g, 2, 8, 0, 5), DomainError);
  CHECK_NOTHROW(correlation_vs_lb(g, 2, 7, 0, 5));
}

TEST_CASE("correlation sweep collapses the original graph each time") {
  // star-of-stars: hubs of very different size so the collapsed graph at
  // l_B=2 retains degree variety
  GraphBuilder b;
  for (int h = 0; h < 6; ++h) {
    std::string hub = "h" + std::to_string(h);
    if (h > 0) b.add_edge("h0", hub);
    for (int l = 0; l < 2 + h * 3; ++l) {
      b.add_edge(hub, hub + "_leaf" + std::to_string(l));
    }
  }
  Graph g = b.build();
  auto series = correlation_vs_lb(g, 2, 3, 3, 20);
  REQUIRE(series.size() == 2);
  CHECK(series[0].nodes > series[1].nodes);  // larger boxes, fewer supernodes
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "netscale/error.hpp"
#include "netscale/geo_model.hpp"
#include "netscale/scaling_fit.hpp"
#include "test_util.hpp"

using namespace netscale;

namespace {

GeoModelConfig small_config(AttachRule rule, std::uint64_t seed) {
  GeoModelConfig c;
  c.rule = rule;
  c.target_nodes = 400;
  c.arena_side = 1000.0;
  c.radius = 40.0;
  c.rng_seed = seed;
  return c;
}

}  // namespace

TEST_CASE("two accepted nodes give one edge under every rule") {
  for (AttachRule rule : {AttachRule::All, AttachRule::Max, AttachRule::Min}) {
    GeoModelConfig c = small_config(rule, 5);
    c.target_nodes = 2;
    GeoGraph gg = grow(c);
    CHECK(gg.graph.node_count() == 2);
    CHECK(gg.graph.edge_count() == 1);
  }
}

TEST_CASE("every edge respects the attachment radius") {
  for (AttachRule rule : {AttachRule::All, AttachRule::Max, AttachRule::Min}) {
    GeoGraph gg = grow(small_config(rule, 11));
    const Graph& g = gg.graph;
    for (const auto& [a, b] : g.edges_by_id()) {
      const auto& pa = g.coord(g.index_of(a));
      const auto& pb = g.coord(g.index_of(b));
      REQUIRE(pa.has_value());
      REQUIRE(pb.has_value());
      const double dx = pa->x - pb->x;
      const double dy = pa->y - pb->y;
      CHECK(std::sqrt(dx * dx + dy * dy) <= 40.0 + 1e-9);
    }
  }
}

TEST_CASE("max and min rules grow trees") {
  for (AttachRule rule : {AttachRule::Max, AttachRule::Min}) {
    GeoGraph gg = grow(small_config(rule, 3));
    CHECK(gg.graph.edge_count() ==
          static_cast<std::size_t>(gg.graph.node_count() - 1));
    CHECK(connected_components(gg.graph).count == 1);
  }
}

TEST_CASE("the all rule outgrows single-attachment rules in mean degree") {
  const std::uint64_t seed = 21;
  double mean_all =
      2.0 * grow(small_config(AttachRule::All, seed)).graph.edge_count() / 400.0;
  double mean_max =
      2.0 * grow(small_config(AttachRule::Max, seed)).graph.edge_count() / 400.0;
  double mean_min =
      2.0 * grow(small_config(AttachRule::Min, seed)).graph.edge_count() / 400.0;
  CHECK(mean_all > mean_max);
  CHECK(mean_all > mean_min);
  CHECK(mean_max == doctest::Approx(mean_min));  // both trees
}

TEST_CASE("growth is reproducible from its config") {
  GeoGraph a = grow(small_config(AttachRule::Max, 123));
  GeoGraph b = grow(small_config(AttachRule::Max, 123));
  CHECK(a.graph == b.graph);
  GeoGraph c = grow(small_config(AttachRule::Max, 124));
  CHECK_FALSE(a.graph == c.graph);
}

TEST_CASE("growth log records accepted and rejected candidates") {
  GeoModelConfig cfg = small_config(AttachRule::All, 9);
  cfg.target_nodes = 50;
  GeoGraph gg = grow(cfg);
  long long accepted = 0, rejected = 0;
  for (const auto& ev : gg.growth_log) {
    if (ev.accepted) {
      ++accepted;
      CHECK_FALSE(ev.attached_to.empty());
    } else {
      ++rejected;
      CHECK(ev.attached_to.empty());
    }
  }
  CHECK(accepted == 49);  // the seed node is not a candidate
  CHECK(rejected == gg.rejected_candidates);
}

TEST_CASE("the rejection limit returns a partial graph with a warning flag") {
  GeoModelConfig c;
  c.rule = AttachRule::All;
  c.target_nodes = 1000;
  c.arena_side = 1000.0;
  c.radius = 1.0;  // nearly impossible to hit the seed
  c.rng_seed = 4;
  c.max_rejections = 200;
  GeoGraph gg = grow(c);
  CHECK(gg.rejection_limit_hit);
  CHECK(gg.graph.node_count() < 1000);
  CHECK(gg.rejected_candidates >= 200);
}

TEST_CASE("config validation") {
  GeoModelConfig c = small_config(AttachRule::All, 0);
  c.radius = -1.0;
  CHECK_THROWS_AS(grow(c), DomainError);
  c = small_config(AttachRule::All, 0);
  c.arena_side = 50.0;  // must exceed twice the radius
  CHECK_THROWS_AS(grow(c), DomainError);
  c = small_config(AttachRule::All, 0);
  c.target_nodes = 1;
  CHECK_THROWS_AS(grow(c), DomainError);
  c = small_config(AttachRule::All, 0);
  c.dimension = 3;
  CHECK_THROWS_AS(grow(c), DomainError);
}

TEST_CASE("diameter growth starts at 1 and never shrinks for trees") {
  GeoModelConfig c = small_config(AttachRule::Min, 31);
  DiameterGrowth dg = diameter_growth(c, {2, 50, 100, 200, 400});
  REQUIRE(dg.series.size() == 5);
  CHECK(dg.series[0] == std::pair<int, int>{2, 1});
  for (std::size_t i = 1; i < dg.series.size(); ++i) {
    CHECK(dg.series[i].second >= dg.series[i - 1].second);
  }
}

TEST_CASE("diameter growth runs are comparable across rules") {
  std::vector<int> checkpoints{2, 100, 300};
  for (AttachRule rule : {AttachRule::All, AttachRule::Max, AttachRule::Min}) {
    GeoModelConfig c = small_config(rule, 8);
    DiameterGrowth dg = diameter_growth(c, checkpoints);
    REQUIRE(dg.series.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(dg.series[i].first == checkpoints[i]);
      CHECK(dg.series[i].second >= 1);
    }
  }
}

TEST_CASE("diameter growth validates its checkpoints") {
  GeoModelConfig c = small_config(AttachRule::All, 0);
  CHECK_THROWS_AS(diameter_growth(c, {}), DomainError);
  CHECK_THROWS_AS(diameter_growth(c, {100, 100}), DomainError);
  CHECK_THROWS_AS(diameter_growth(c, {100, 401}), DomainError);
}

TEST_CASE("flower generation 1 is a cycle") {
  Graph g = flower_graph(2, 2, 1);
  CHECK(g.node_count() == 4);
  CHECK(g.edge_count() == 4);
  for (int u = 0; u < 4; ++u) CHECK(g.degree(u) == 2);
}

TEST_CASE("flower node counts follow the closed form") {
  // N_g = (2/3) 4^g + 4/3 for the (2,2) family
  for (int g = 1; g <= 5; ++g) {
    Graph fl = flower_graph(2, 2, g);
    const int expect = (2 * (1 << (2 * g)) + 4) / 3;
    CHECK(fl.node_count() == expect);
    CHECK(fl.edge_count() == static_cast<std::size_t>(1 << (2 * g)));
  }
  CHECK(flower_graph(2, 2, 3).node_count() == 44);
}

TEST_CASE("the u=1 flower family is the small-world class") {
  Graph g13 = flower_graph(1, 3, 2);
  CHECK(g13.node_count() == 12);
  CHECK(g13.edge_count() == 16);

  // a deeper generation carries enough box-count range to classify
  Graph deep = flower_graph(1, 3, 4);
  BoxCountSeries series = box_counts(deep, diameter(deep), 3, 20);
  ScalingClass sc = classify_topology(series);
  CHECK(sc.verdict == TopologyClass::SmallWorld);
}

TEST_CASE("flower parameter validation") {
  CHECK_THROWS_AS(flower_graph(0, 2, 3), DomainError);
  CHECK_THROWS_AS(flower_graph(2, 1, 3), DomainError);
  CHECK_THROWS_AS(flower_graph(1, 1, 3), DomainError);
  CHECK_THROWS_AS(flower_graph(2, 2, 0), DomainError);
}

#include "netscale/renorm.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "json.hpp"
#include "netscale/error.hpp"
#include "netscale/graph_io.hpp"
#include "netscale/parallel.hpp"
#include "netscale/rng.hpp"

namespace netscale {

namespace {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

std::optional<KnnProfile> try_knn(const Graph& g) {
  try {
    return knn_profile(g);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

}  // namespace

Graph collapse(const Graph& g, const BoxCover& c) {
  auto check = validate_cover(g, c);
  if (!check.ok) throw DomainError("collapse: invalid cover: " + check.message);

  std::vector<std::vector<int>> members(c.n_boxes);
  for (int u = 0; u < g.node_count(); ++u) {
    members[c.assignment[u]].push_back(u);
  }

  std::vector<std::string> box_id(c.n_boxes);
  std::map<std::string, int> seen;
  for (int b = 0; b < c.n_boxes; ++b) {
    std::vector<std::string> ids;
    ids.reserve(members[b].size());
    for (int u : members[b]) ids.push_back(g.id_of(u));
    std::sort(ids.begin(), ids.end());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& id : ids) {
      h = fnv1a64(id, h);
      h = fnv1a64(std::string_view("\n"), h);
    }
    std::string name = "b" + hex64(h);
    int n_prior = seen[name]++;
    if (n_prior > 0) name += "-" + std::to_string(n_prior);
    box_id[b] = std::move(name);
  }

  GraphBuilder builder;
  for (int b = 0; b < c.n_boxes; ++b) {
    NodeMeta meta;
    double sx = 0.0, sy = 0.0;
    int with_coord = 0;
    for (int u : members[b]) {
      if (const auto& p = g.coord(u)) {
        sx += p->x;
        sy += p->y;
        ++with_coord;
      }
    }
    if (with_coord > 0) {
      meta.coord = Point{sx / with_coord, sy / with_coord};
    }
    builder.add_node(box_id[b], meta);
  }
  for (int u = 0; u < g.node_count(); ++u) {
    for (int v : g.neighbors(u)) {
      if (v <= u) continue;
      int bu = c.assignment[u], bv = c.assignment[v];
      if (bu != bv) builder.add_edge(box_id[bu], box_id[bv]);
    }
  }
  return builder.build();
}

namespace {

RenormFlow flow_connected(const Graph& g, int l_b, std::uint64_t rng_seed,
                          int restarts) {
  RenormFlow flow;
  flow.l_b = l_b;
  flow.stages.push_back({g, try_knn(g)});
  Graph cur = g;
  int stage = 0;
  while (cur.node_count() > 1) {
    BoxCover c = cover(cur, l_b,
                       mix_seed(rng_seed, static_cast<std::uint64_t>(stage)),
                       restarts);
    Graph next = collapse(cur, c);
    if (next.node_count() >= cur.node_count()) {
      // cannot happen for connected graphs at l_b >= 2; guard regardless
      throw DomainError("renormalization made no progress at stage " +
                        std::to_string(stage));
    }
    flow.stages.push_back({next, try_knn(next)});
    cur = std::move(next);
    ++stage;
  }
  flow.steps = static_cast<int>(flow.stages.size()) - 1;
  return flow;
}

}  // namespace

std::vector<RenormFlow> renormalization_flow(const Graph& g, int l_b,
                                             std::uint64_t rng_seed,
                                             int restarts) {
  if (g.node_count() == 0) throw DomainError("renormalization_flow: empty graph");
  if (l_b < 2) throw DomainError("renormalization_flow: l_b must be >= 2");

  auto comps = connected_components(g);
  std::vector<RenormFlow> flows;
  if (comps.count == 1) {
    flows.push_back(flow_connected(g, l_b, rng_seed, restarts));
    return flows;
  }
  for (int cid = 0; cid < comps.count; ++cid) {
    std::vector<int> nodes;
    for (int u = 0; u < g.node_count(); ++u) {
      if (comps.id_of_node[u] == cid) nodes.push_back(u);
    }
    flows.push_back(flow_connected(g.subgraph(nodes), l_b,
                                   mix_seed(rng_seed, static_cast<std::uint64_t>(cid)),
                                   restarts));
  }
  return flows;
}

std::vector<CorrelationPoint> correlation_vs_lb(const Graph& g, int lb_lo,
                                                int lb_hi,
                                                std::uint64_t rng_seed,
                                                int restarts) {
  if (lb_lo < 2) throw DomainError("correlation_vs_lb: range starts below 2");
  if (lb_hi < lb_lo) throw DomainError("correlation_vs_lb: empty range");
  int diam = diameter(g);
  if (lb_hi > diam) {
    throw DomainError("correlation_vs_lb: range exceeds graph diameter " +
                      std::to_string(diam));
  }

  const int n_points = lb_hi - lb_lo + 1;
  std::vector<CorrelationPoint> series(n_points);
  parallel_for(n_points, [&](int i) {
    const int l_b = lb_lo + i;
    BoxCover c = cover(g, l_b, mix_seed(rng_seed, static_cast<std::uint64_t>(l_b)),
                       restarts);
    Graph collapsed = collapse(g, c);
    CorrelationPoint pt;
    pt.l_b = l_b;
    pt.nodes = collapsed.node_count();
    pt.edges = collapsed.edge_count();
    auto knn = try_knn(collapsed);
    if (!knn) {
      pt.flag = "undefined: fewer than 2 non-isolated nodes";
    } else {
      std::vector<std::pair<int, double>> distinct;
      for (const auto& e : knn->entries) distinct.emplace_back(e.k, e.knn);
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()),
                     distinct.end());
      if (distinct.size() < 3) {
        pt.flag = "undefined: fewer than 3 distinct (k, k_nn) points";
      } else if (!knn->pearson) {
        pt.flag = "undefined: zero variance in (k, k_nn)";
      } else {
        pt.pearson = knn->pearson;
      }
    }
    series[i] = std::move(pt);
  });
  return series;
}

namespace {

nlohmann::json flow_to_json(const RenormFlow& flow) {
  nlohmann::json stages = nlohmann::json::array();
  for (std::size_t i = 0; i < flow.stages.size(); ++i) {
    const auto& st = flow.stages[i];
    nlohmann::json j{{"stage", i},
                     {"nodes", st.graph.node_count()},
                     {"edges", st.graph.edge_count()}};
    if (st.knn && st.knn->pearson) {
      j["pearson"] = *st.knn->pearson;
    } else {
      j["pearson"] = nullptr;
    }
    stages.push_back(std::move(j));
  }
  return nlohmann::json{
      {"l_B", flow.l_b}, {"steps", flow.steps}, {"stages", std::move(stages)}};
}

}  // namespace

void write_flow_json(const std::filesystem::path& path, const RenormFlow& flow) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  nlohmann::json j = flow_to_json(flow);
  j["schema"] = "netscale.flow/1";
  out << j.dump(2) << '\n';
}

void write_flows_json(const std::filesystem::path& path,
                      const std::vector<RenormFlow>& flows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& f : flows) arr.push_back(flow_to_json(f));
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << nlohmann::json{{"schema", "netscale.flows/1"},
                        {"flows", std::move(arr)}}
             .dump(2)
      << '\n';
}

void write_correlation_series(const std::filesystem::path& path,
                              const std::vector<CorrelationPoint>& series) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "l_B,pearson,nodes,edges,flag\n";
  for (const auto& pt : series) {
    out << pt.l_b << ',';
    if (pt.pearson) out << format_double(*pt.pearson);
    out << ',' << pt.nodes << ',' << pt.edges << ',' << pt.flag << '\n';
  }
}

}  // namespace netscale

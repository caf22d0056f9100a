#include "netscale/geo_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>

#include "netscale/error.hpp"
#include "netscale/rng.hpp"

namespace netscale {

AttachRule parse_attach_rule(const std::string& name) {
  if (name == "all") return AttachRule::All;
  if (name == "max") return AttachRule::Max;
  if (name == "min") return AttachRule::Min;
  throw FormatError("unknown attachment rule '" + name +
                    "' (expected all|max|min)");
}

std::string to_string(AttachRule rule) {
  switch (rule) {
    case AttachRule::All:
      return "all";
    case AttachRule::Max:
      return "max";
    default:
      return "min";
  }
}

namespace {

void validate(const GeoModelConfig& c) {
  if (c.dimension != 2) {
    throw DomainError("geo model: only dimension 2 is supported");
  }
  if (!(c.radius > 0.0)) throw DomainError("geo model: radius must be > 0");
  if (!(c.arena_side > 2.0 * c.radius)) {
    throw DomainError("geo model: arena side must exceed twice the radius");
  }
  if (c.target_nodes < 2) {
    throw DomainError("geo model: target_nodes must be >= 2");
  }
  if (c.max_rejections < 1) {
    throw DomainError("geo model: max_rejections must be >= 1");
  }
}

// Uniform grid with cell size = radius; in-range nodes are always inside the
// 3x3 cell block around the query point.
class GridIndex {
 public:
  GridIndex(double arena, double radius)
      : cell_(radius),
        per_row_(std::max<int>(1, static_cast<int>(arena / radius) + 1)) {
    cells_.resize(static_cast<std::size_t>(per_row_) * per_row_);
  }

  void insert(int node, double x, double y) {
    cells_[cell_index(x, y)].push_back(node);
  }

  template <typename Fn>
  void for_candidates(double x, double y, Fn&& fn) const {
    const int cx = clamp_coord(x);
    const int cy = clamp_coord(y);
    for (int gx = std::max(0, cx - 1); gx <= std::min(per_row_ - 1, cx + 1);
         ++gx) {
      for (int gy = std::max(0, cy - 1); gy <= std::min(per_row_ - 1, cy + 1);
           ++gy) {
        for (int node : cells_[static_cast<std::size_t>(gx) * per_row_ + gy]) {
          fn(node);
        }
      }
    }
  }

 private:
  int clamp_coord(double v) const {
    int c = static_cast<int>(v / cell_);
    return std::clamp(c, 0, per_row_ - 1);
  }
  std::size_t cell_index(double x, double y) const {
    return static_cast<std::size_t>(clamp_coord(x)) * per_row_ +
           clamp_coord(y);
  }

  double cell_;
  int per_row_;
  std::vector<std::vector<int>> cells_;
};

std::string node_name(int idx) { return "n" + std::to_string(idx); }

GeoGraph grow_impl(const GeoModelConfig& config,
                   const std::function<void(int, const std::vector<Point>&,
                                            const std::vector<std::vector<int>>&)>&
                       on_accept) {
  validate(config);
  Rng rng(config.rng_seed);
  const double arena = config.arena_side;
  const double r2 = config.radius * config.radius;

  std::vector<Point> coords;
  std::vector<std::vector<int>> adj;
  GridIndex grid(arena, config.radius);
  GeoGraph out;

  coords.push_back({arena / 2.0, arena / 2.0});
  adj.emplace_back();
  grid.insert(0, coords[0].x, coords[0].y);
  if (on_accept) on_accept(1, coords, adj);

  std::vector<int> in_range;
  long long candidate = 0;
  long long consecutive_rejections = 0;
  while (static_cast<int>(coords.size()) < config.target_nodes) {
    ++candidate;
    const double x = rng.next_double() * arena;
    const double y = rng.next_double() * arena;
    in_range.clear();
    grid.for_candidates(x, y, [&](int node) {
      const double dx = coords[node].x - x;
      const double dy = coords[node].y - y;
      if (dx * dx + dy * dy <= r2) in_range.push_back(node);
    });

    if (in_range.empty()) {
      ++out.rejected_candidates;
      ++consecutive_rejections;
      if (config.record_log) out.growth_log.push_back({candidate, false, {}});
      if (consecutive_rejections >= config.max_rejections) {
        out.rejection_limit_hit = true;
        break;
      }
      continue;
    }
    consecutive_rejections = 0;
    std::sort(in_range.begin(), in_range.end());

    std::vector<int> targets;
    switch (config.rule) {
      case AttachRule::All:
        targets = in_range;
        break;
      case AttachRule::Max:
      case AttachRule::Min: {
        const bool want_max = config.rule == AttachRule::Max;
        std::size_t extreme = 0;
        std::vector<int> ties{in_range[0]};
        for (std::size_t i = 1; i < in_range.size(); ++i) {
          const int d = static_cast<int>(adj[in_range[i]].size());
          const int cur = static_cast<int>(adj[in_range[extreme]].size());
          if (d == cur) {
            ties.push_back(in_range[i]);
          } else if (want_max ? d > cur : d < cur) {
            extreme = i;
            ties.assign(1, in_range[i]);
          }
        }
        targets.push_back(
            ties[static_cast<std::size_t>(rng.next_below(ties.size()))]);
        break;
      }
    }

    const int idx = static_cast<int>(coords.size());
    coords.push_back({x, y});
    adj.emplace_back();
    for (int t : targets) {
      adj[idx].push_back(t);
      adj[t].push_back(idx);
    }
    grid.insert(idx, x, y);
    if (config.record_log) {
      GrowthEvent ev{candidate, true, {}};
      ev.attached_to.reserve(targets.size());
      for (int t : targets) ev.attached_to.push_back(node_name(t));
      out.growth_log.push_back(std::move(ev));
    }
    if (on_accept) on_accept(idx + 1, coords, adj);
  }

  GraphBuilder builder;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    NodeMeta meta;
    meta.coord = coords[i];
    builder.add_node(node_name(static_cast<int>(i)), meta);
  }
  for (std::size_t u = 0; u < adj.size(); ++u) {
    for (int v : adj[u]) {
      if (v > static_cast<int>(u)) {
        builder.add_edge(node_name(static_cast<int>(u)), node_name(v));
      }
    }
  }
  out.graph = builder.build();
  return out;
}

Graph graph_from_arrays(const std::vector<Point>& coords,
                        const std::vector<std::vector<int>>& adj) {
  GraphBuilder builder;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    NodeMeta meta;
    meta.coord = coords[i];
    builder.add_node(node_name(static_cast<int>(i)), meta);
  }
  for (std::size_t u = 0; u < adj.size(); ++u) {
    for (int v : adj[u]) {
      if (v > static_cast<int>(u)) {
        builder.add_edge(node_name(static_cast<int>(u)), node_name(v));
      }
    }
  }
  return builder.build();
}

}  // namespace

GeoGraph grow(const GeoModelConfig& config) { return grow_impl(config, nullptr); }

DiameterGrowth diameter_growth(const GeoModelConfig& config,
                               const std::vector<int>& checkpoints) {
  if (checkpoints.empty()) {
    throw DomainError("diameter_growth: no checkpoints given");
  }
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 2 ||
        (i > 0 && checkpoints[i] <= checkpoints[i - 1])) {
      throw DomainError("diameter_growth: checkpoints must be increasing and >= 2");
    }
  }
  if (checkpoints.back() > config.target_nodes) {
    throw DomainError("diameter_growth: checkpoint exceeds target_nodes");
  }

  DiameterGrowth dg;
  std::size_t next = 0;
  GeoModelConfig cfg = config;
  cfg.record_log = false;
  GeoGraph gg = grow_impl(
      cfg, [&](int n, const std::vector<Point>& coords,
               const std::vector<std::vector<int>>& adj) {
        if (next < checkpoints.size() && n == checkpoints[next]) {
          dg.series.emplace_back(n, diameter(graph_from_arrays(coords, adj)));
          ++next;
        }
      });
  dg.rejection_limit_hit = gg.rejection_limit_hit;
  return dg;
}

Graph flower_graph(int u, int v, int generations) {
  if (u < 1 || v < u || v < 2 || generations < 1) {
    throw DomainError("flower_graph: need u >= 1, v >= max(u, 2), generations >= 1");
  }
  int next_node = 0;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < u + v; ++i) {
    edges.emplace_back(i, (i + 1) % (u + v));
  }
  next_node = u + v;

  for (int gen = 2; gen <= generations; ++gen) {
    std::vector<std::pair<int, int>> grown;
    grown.reserve(edges.size() * static_cast<std::size_t>(u + v));
    for (const auto& [a, b] : edges) {
      for (int path_len : {u, v}) {
        int prev = a;
        for (int step = 1; step < path_len; ++step) {
          grown.emplace_back(prev, next_node);
          prev = next_node++;
        }
        grown.emplace_back(prev, b);
      }
    }
    edges = std::move(grown);
  }

  GraphBuilder builder;
  for (int i = 0; i < next_node; ++i) builder.add_node("f" + std::to_string(i));
  for (const auto& [a, b] : edges) {
    builder.add_edge("f" + std::to_string(a), "f" + std::to_string(b));
  }
  return builder.build();
}

void write_growth_log(const std::filesystem::path& path, const GeoGraph& gg) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "candidate,accepted,attached_to\n";
  for (const auto& ev : gg.growth_log) {
    out << ev.candidate << ',' << (ev.accepted ? 1 : 0) << ',';
    for (std::size_t i = 0; i < ev.attached_to.size(); ++i) {
      if (i) out << ';';
      out << ev.attached_to[i];
    }
    out << '\n';
  }
}

void write_diameter_series(const std::filesystem::path& path,
                           const DiameterGrowth& dg) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "nodes,diameter\n";
  for (const auto& [n, d] : dg.series) {
    out << n << ',' << d << '\n';
  }
}

}  // namespace netscale

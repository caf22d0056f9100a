#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "netscale/graph.hpp"

namespace netscale {

enum class AttachRule { All, Max, Min };

AttachRule parse_attach_rule(const std::string& name);
std::string to_string(AttachRule rule);

struct GeoModelConfig {
  int dimension = 2;  // the planar case is the only supported one
  double radius = 15.0;
  double arena_side = 1000.0;
  int target_nodes = 3000;
  AttachRule rule = AttachRule::All;
  std::uint64_t rng_seed = 0;
  long long max_rejections = 5'000'000;  // consecutive misses before giving up
  bool record_log = true;
};

struct GrowthEvent {
  long long candidate = 0;  // 1-based candidate index after the seed
  bool accepted = false;
  std::vector<std::string> attached_to;
};

struct GeoGraph {
  Graph graph;
  std::vector<GrowthEvent> growth_log;
  long long rejected_candidates = 0;
  bool rejection_limit_hit = false;
};

// Grows a spatial-attachment network: the seed sits at the arena center;
// candidates are sampled uniformly over the arena and kept only when an
// existing node lies within `radius`. The rule picks the attachment targets:
// All links to every node in range, Max to the highest-degree node in range,
// Min to the lowest-degree one (degree ties break uniformly at random).
GeoGraph grow(const GeoModelConfig& config);

struct DiameterGrowth {
  std::vector<std::pair<int, int>> series;  // (node count, diameter)
  bool rejection_limit_hit = false;
};

// One growth run, measuring the diameter at each checkpoint node count.
DiameterGrowth diameter_growth(const GeoModelConfig& config,
                               const std::vector<int>& checkpoints);

// (u,v)-flower: generation 1 is a cycle of u+v nodes; each generation
// replaces every edge with two parallel paths of u and v edges. For u >= 2
// the family is fractal with box dimension ln(u+v)/ln(u); u = 1 gives the
// small-world family. A closed-form testing oracle for the covering and
// classification code.
Graph flower_graph(int u, int v, int generations);

void write_growth_log(const std::filesystem::path& path, const GeoGraph& gg);
void write_diameter_series(const std::filesystem::path& path,
                           const DiameterGrowth& dg);

}  // namespace netscale

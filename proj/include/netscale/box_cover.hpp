#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "netscale/graph.hpp"

namespace netscale {

// Partition of a graph's nodes into boxes: within a box every pair of nodes
// is at shortest-path distance < l_b in the source graph.
struct BoxCover {
  int l_b = 1;
  std::vector<int> assignment;  // node index -> box id, ids are dense from 0
  int n_boxes = 0;
};

// Minimizes box count with greedy coloring of the distance-conflict relation:
// nodes are processed in some order and each joins the lowest box whose
// members all lie within distance < l_b (checked with a BFS truncated at
// depth l_b-1), else opens a new box. Restart 0 uses the node order as given;
// further restarts use seeded shuffles. The smallest cover wins, ties by
// restart index, so the result is deterministic for a fixed seed.
BoxCover cover(const Graph& g, int l_b, std::uint64_t rng_seed, int restarts);

struct CoverCheck {
  bool ok = true;
  std::string message;  // first violation when !ok
};

// Re-checks every BoxCover invariant against the original graph.
CoverCheck validate_cover(const Graph& g, const BoxCover& c);

struct BoxCountSeries {
  std::vector<std::pair<int, double>> entries;  // (l_b, box count)
  int source_nodes = 0;
  int components = 1;
};

// N(l_b) for l_b in [1, l_b_max]. Monotonicity is enforced by carrying the
// best cover found so far forward as an upper bound (a cover valid at l_b is
// valid at any larger length).
BoxCountSeries box_counts(const Graph& g, int l_b_max, std::uint64_t rng_seed,
                          int restarts);

void write_box_counts(const std::filesystem::path& path,
                      const BoxCountSeries& series);
BoxCountSeries read_box_counts(const std::filesystem::path& path);

void write_cover(const std::filesystem::path& path, const Graph& g,
                 const BoxCover& c);

}  // namespace netscale

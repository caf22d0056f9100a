#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "netscale/box_cover.hpp"
#include "netscale/graph.hpp"

namespace netscale {

// Replaces each box with a supernode; supernodes are adjacent iff some edge
// of g joins their boxes. Supernode ids hash the sorted member ids, so a flow
// is reproducible from its seed. Coordinates collapse to member centroids.
// Throws DomainError when the cover fails validation.
Graph collapse(const Graph& g, const BoxCover& c);

struct RenormStage {
  Graph graph;
  std::optional<KnnProfile> knn;  // empty when undefined on this stage
};

struct RenormFlow {
  int l_b = 0;
  std::vector<RenormStage> stages;  // stage 0 is the input graph
  int steps = 0;                    // collapses until a single node
};

// Iterates cover/collapse until one node remains. Disconnected input yields
// one flow per connected component, in first-node order.
std::vector<RenormFlow> renormalization_flow(const Graph& g, int l_b,
                                             std::uint64_t rng_seed,
                                             int restarts);

struct CorrelationPoint {
  int l_b = 0;
  std::optional<double> pearson;
  std::string flag;  // non-empty when the entry is undefined
  int nodes = 0;
  std::size_t edges = 0;
};

// Cor(k_nn, k) of the once-collapsed graph for each l_b in [lb_lo, lb_hi].
// Every l_b collapses the original graph, not the previous stage.
std::vector<CorrelationPoint> correlation_vs_lb(const Graph& g, int lb_lo,
                                                int lb_hi,
                                                std::uint64_t rng_seed,
                                                int restarts);

void write_flow_json(const std::filesystem::path& path, const RenormFlow& flow);
void write_flows_json(const std::filesystem::path& path,
                      const std::vector<RenormFlow>& flows);
void write_correlation_series(const std::filesystem::path& path,
                              const std::vector<CorrelationPoint>& series);

}  // namespace netscale

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace netscale {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct NodeMeta {
  std::optional<Point> coord;
  std::string label;
};

struct BuildReport {
  std::size_t self_loops_dropped = 0;
  std::size_t duplicate_edges_merged = 0;
};

// Immutable simple undirected graph. Node identities are opaque strings;
// internally nodes are dense indices in first-insertion order, which keeps
// every traversal and export deterministic. Safe to share across threads
// once built.
class Graph {
 public:
  Graph() = default;

  int node_count() const { return static_cast<int>(ids_.size()); }
  std::size_t edge_count() const { return edge_count_; }

  bool has_node(std::string_view id) const { return index_of(id) >= 0; }
  int index_of(std::string_view id) const;
  const std::string& id_of(int idx) const { return ids_[idx]; }

  std::span<const int> neighbors(int idx) const { return adj_[idx]; }
  int degree(int idx) const { return static_cast<int>(adj_[idx].size()); }
  bool has_edge(int a, int b) const;

  const std::optional<Point>& coord(int idx) const { return coords_[idx]; }
  const std::string& label(int idx) const { return labels_[idx]; }

  // Edges as id pairs, each once, in node-index order.
  std::vector<std::pair<std::string, std::string>> edges_by_id() const;

  // Induced subgraph on the given node indices (metadata preserved).
  Graph subgraph(std::span<const int> nodes) const;

  bool operator==(const Graph& other) const;

 private:
  friend class GraphBuilder;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<int>> adj_;  // sorted neighbor indices
  std::vector<std::optional<Point>> coords_;
  std::vector<std::string> labels_;
  std::size_t edge_count_ = 0;
};

// Incremental construction with simple-graph cleanup: self-loops are dropped,
// parallel edges merged, and the counts reported.
class GraphBuilder {
 public:
  int add_node(std::string_view id);
  int add_node(std::string_view id, const NodeMeta& meta);
  void add_edge(std::string_view a, std::string_view b);
  void set_meta(std::string_view id, const NodeMeta& meta);

  int node_count() const { return static_cast<int>(ids_.size()); }
  Graph build();
  const BuildReport& report() const { return report_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<int>> adj_;  // unsorted, may hold duplicates
  std::vector<std::optional<Point>> coords_;
  std::vector<std::string> labels_;
  BuildReport report_;
};

// Builds a graph from an edge list; ids must be non-empty. Nodes appear in
// first-use order. Metadata entries for unknown ids are ignored.
Graph build_graph(
    const std::vector<std::pair<std::string, std::string>>& edges,
    const std::unordered_map<std::string, NodeMeta>& node_meta = {},
    BuildReport* report = nullptr);

// Hop distances from a source index; -1 marks unreachable nodes.
std::vector<int> bfs_from(const Graph& g, int source);

// As above but keyed by id, with unreachable nodes omitted.
std::unordered_map<std::string, int> bfs_distances(const Graph& g,
                                                   std::string_view source);

// Maximum eccentricity over the largest connected component.
int diameter(const Graph& g);

// Component id per node (ids ordered by first node index) plus count.
struct Components {
  std::vector<int> id_of_node;
  int count = 0;
};
Components connected_components(const Graph& g);

double density_from_counts(std::size_t nodes, std::size_t edges);
double density(const Graph& g);

// Per-node (degree, mean neighbor degree) with the node-level Pearson
// correlation; pearson is empty when the pairs carry no variance.
struct KnnProfile {
  struct Entry {
    int node = 0;
    int k = 0;
    double knn = 0.0;
  };
  std::vector<Entry> entries;  // one per non-isolated node
  std::optional<double> pearson;
  std::vector<std::pair<int, double>> binned_curve;  // (k, mean knn)
};
KnnProfile knn_profile(const Graph& g);

}  // namespace netscale

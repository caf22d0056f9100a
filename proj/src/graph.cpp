#include "netscale/graph.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <queue>

#include "netscale/error.hpp"
#include "netscale/parallel.hpp"
#include "netscale/stats.hpp"

namespace netscale {

int Graph::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? -1 : it->second;
}

bool Graph::has_edge(int a, int b) const {
  const auto& na = adj_[a];
  return std::binary_search(na.begin(), na.end(), b);
}

std::vector<std::pair<std::string, std::string>> Graph::edges_by_id() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(edge_count_);
  for (int u = 0; u < node_count(); ++u) {
    for (int v : adj_[u]) {
      if (v > u) out.emplace_back(ids_[u], ids_[v]);
    }
  }
  return out;
}

Graph Graph::subgraph(std::span<const int> nodes) const {
  std::vector<int> remap(ids_.size(), -1);
  Graph out;
  out.ids_.reserve(nodes.size());
  for (int u : nodes) {
    remap[u] = static_cast<int>(out.ids_.size());
    out.ids_.push_back(ids_[u]);
    out.index_.emplace(ids_[u], remap[u]);
    out.coords_.push_back(coords_[u]);
    out.labels_.push_back(labels_[u]);
  }
  out.adj_.resize(out.ids_.size());
  for (int u : nodes) {
    for (int v : adj_[u]) {
      if (remap[v] >= 0) out.adj_[remap[u]].push_back(remap[v]);
    }
  }
  for (auto& nbrs : out.adj_) {
    std::sort(nbrs.begin(), nbrs.end());
    out.edge_count_ += nbrs.size();
  }
  out.edge_count_ /= 2;
  return out;
}

bool Graph::operator==(const Graph& other) const {
  return ids_ == other.ids_ && adj_ == other.adj_ && labels_ == other.labels_ &&
         [&] {
           if (coords_.size() != other.coords_.size()) return false;
           for (std::size_t i = 0; i < coords_.size(); ++i) {
             if (coords_[i].has_value() != other.coords_[i].has_value())
               return false;
             if (coords_[i] && (coords_[i]->x != other.coords_[i]->x ||
                                coords_[i]->y != other.coords_[i]->y))
               return false;
           }
           return true;
         }();
}

int GraphBuilder::add_node(std::string_view id) {
  if (id.empty()) throw FormatError("node id must be a non-empty string");
  auto it = index_.find(std::string(id));
  if (it != index_.end()) return it->second;
  int idx = static_cast<int>(ids_.size());
  ids_.emplace_back(id);
  index_.emplace(ids_.back(), idx);
  adj_.emplace_back();
  coords_.emplace_back();
  labels_.emplace_back();
  return idx;
}

int GraphBuilder::add_node(std::string_view id, const NodeMeta& meta) {
  int idx = add_node(id);
  if (meta.coord) coords_[idx] = meta.coord;
  if (!meta.label.empty()) labels_[idx] = meta.label;
  return idx;
}

void GraphBuilder::add_edge(std::string_view a, std::string_view b) {
  int ia = add_node(a);
  int ib = add_node(b);
  if (ia == ib) {
    ++report_.self_loops_dropped;
    return;
  }
  adj_[ia].push_back(ib);
  adj_[ib].push_back(ia);
}

void GraphBuilder::set_meta(std::string_view id, const NodeMeta& meta) {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return;
  if (meta.coord) coords_[it->second] = meta.coord;
  if (!meta.label.empty()) labels_[it->second] = meta.label;
}

Graph GraphBuilder::build() {
  Graph g;
  g.ids_ = std::move(ids_);
  g.index_ = std::move(index_);
  g.coords_ = std::move(coords_);
  g.labels_ = std::move(labels_);
  g.adj_.resize(g.ids_.size());
  for (std::size_t u = 0; u < adj_.size(); ++u) {
    auto& nbrs = adj_[u];
    std::sort(nbrs.begin(), nbrs.end());
    auto last = std::unique(nbrs.begin(), nbrs.end());
    report_.duplicate_edges_merged +=
        static_cast<std::size_t>(nbrs.end() - last);
    nbrs.erase(last, nbrs.end());
    g.adj_[u] = std::move(nbrs);
    g.edge_count_ += g.adj_[u].size();
  }
  // each merged edge was counted from both endpoints
  report_.duplicate_edges_merged /= 2;
  g.edge_count_ /= 2;
  adj_.clear();
  return g;
}

Graph build_graph(
    const std::vector<std::pair<std::string, std::string>>& edges,
    const std::unordered_map<std::string, NodeMeta>& node_meta,
    BuildReport* report) {
  GraphBuilder b;
  for (const auto& [u, v] : edges) b.add_edge(u, v);
  for (const auto& [id, meta] : node_meta) b.set_meta(id, meta);
  Graph g = b.build();
  if (report) *report = b.report();
  return g;
}

std::vector<int> bfs_from(const Graph& g, int source) {
  std::vector<int> dist(g.node_count(), -1);
  std::queue<int> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : g.neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

std::unordered_map<std::string, int> bfs_distances(const Graph& g,
                                                   std::string_view source) {
  int s = g.index_of(source);
  if (s < 0) {
    throw DomainError("bfs_distances: unknown source node '" +
                      std::string(source) + "'");
  }
  auto dist = bfs_from(g, s);
  std::unordered_map<std::string, int> out;
  for (int u = 0; u < g.node_count(); ++u) {
    if (dist[u] >= 0) out.emplace(g.id_of(u), dist[u]);
  }
  return out;
}

Components connected_components(const Graph& g) {
  Components comps;
  comps.id_of_node.assign(g.node_count(), -1);
  for (int u = 0; u < g.node_count(); ++u) {
    if (comps.id_of_node[u] >= 0) continue;
    int cid = comps.count++;
    std::queue<int> q;
    comps.id_of_node[u] = cid;
    q.push(u);
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (int v : g.neighbors(x)) {
        if (comps.id_of_node[v] < 0) {
          comps.id_of_node[v] = cid;
          q.push(v);
        }
      }
    }
  }
  return comps;
}

int diameter(const Graph& g) {
  if (g.node_count() == 0) throw DomainError("diameter: empty graph");
  if (g.node_count() == 1) return 0;

  auto comps = connected_components(g);
  std::vector<int> sizes(comps.count, 0);
  for (int c : comps.id_of_node) ++sizes[c];
  int largest =
      static_cast<int>(std::max_element(sizes.begin(), sizes.end()) -
                       sizes.begin());
  std::vector<int> members;
  for (int u = 0; u < g.node_count(); ++u) {
    if (comps.id_of_node[u] == largest) members.push_back(u);
  }
  if (members.size() == 1) return 0;

  std::atomic<int> best{0};
  parallel_for(static_cast<int>(members.size()), [&](int i) {
    auto dist = bfs_from(g, members[i]);
    int ecc = 0;
    for (int u : members) ecc = std::max(ecc, dist[u]);
    int cur = best.load();
    while (ecc > cur && !best.compare_exchange_weak(cur, ecc)) {
    }
  });
  return best.load();
}

double density_from_counts(std::size_t nodes, std::size_t edges) {
  if (nodes < 2) throw DomainError("density: need >= 2 nodes");
  const double pairs = 0.5 * static_cast<double>(nodes) *
                       static_cast<double>(nodes - 1);
  return static_cast<double>(edges) / pairs;
}

double density(const Graph& g) {
  return density_from_counts(static_cast<std::size_t>(g.node_count()),
                             g.edge_count());
}

KnnProfile knn_profile(const Graph& g) {
  KnnProfile profile;
  for (int u = 0; u < g.node_count(); ++u) {
    int k = g.degree(u);
    if (k == 0) continue;
    double sum = 0.0;
    for (int v : g.neighbors(u)) sum += g.degree(v);
    profile.entries.push_back({u, k, sum / k});
  }
  if (profile.entries.size() < 2) {
    throw DomainError("knn_profile: need >= 2 non-isolated nodes");
  }

  std::vector<double> ks, knns;
  ks.reserve(profile.entries.size());
  knns.reserve(profile.entries.size());
  std::map<int, std::pair<double, int>> bins;
  for (const auto& e : profile.entries) {
    ks.push_back(e.k);
    knns.push_back(e.knn);
    auto& [total, cnt] = bins[e.k];
    total += e.knn;
    ++cnt;
  }
  profile.pearson = pearson(ks, knns);
  for (const auto& [k, acc] : bins) {
    profile.binned_curve.emplace_back(k, acc.first / acc.second);
  }
  return profile;
}

}  // namespace netscale

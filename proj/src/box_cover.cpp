#include "netscale/box_cover.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "netscale/error.hpp"
#include "netscale/parallel.hpp"
#include "netscale/rng.hpp"

namespace netscale {

namespace {

// One greedy run over a fixed node order. Scratch buffers are caller-owned so
// restarts don't reallocate.
struct GreedyScratch {
  std::vector<int> stamp;
  std::vector<int> reached;
  std::vector<int> frontier;
  std::vector<int> next;
  std::vector<int> member_hits;   // per box: members seen by current BFS
  std::vector<int> touched_boxes;
  int token = 0;
};

int greedy_cover_run(const Graph& g, int l_b, const std::vector<int>& order,
                     std::vector<int>& color, GreedyScratch& s) {
  const int n = g.node_count();
  color.assign(n, -1);
  std::vector<int> box_size;
  if (static_cast<int>(s.stamp.size()) != n) s.stamp.assign(n, 0);

  for (int u : order) {
    // nodes within distance <= l_b - 1 of u
    ++s.token;
    s.reached.clear();
    s.frontier.clear();
    s.stamp[u] = s.token;
    s.reached.push_back(u);
    s.frontier.push_back(u);
    for (int depth = 1; depth < l_b && !s.frontier.empty(); ++depth) {
      s.next.clear();
      for (int x : s.frontier) {
        for (int v : g.neighbors(x)) {
          if (s.stamp[v] != s.token) {
            s.stamp[v] = s.token;
            s.reached.push_back(v);
            s.next.push_back(v);
          }
        }
      }
      s.frontier.swap(s.next);
    }

    s.touched_boxes.clear();
    for (int v : s.reached) {
      int c = color[v];
      if (c < 0) continue;
      if (s.member_hits[c] == 0) s.touched_boxes.push_back(c);
      ++s.member_hits[c];
    }
    // u may join a box only if the BFS saw every current member
    int chosen = -1;
    for (int c : s.touched_boxes) {
      if (s.member_hits[c] == box_size[c] && (chosen < 0 || c < chosen)) {
        chosen = c;
      }
      s.member_hits[c] = 0;
    }
    if (chosen < 0) {
      chosen = static_cast<int>(box_size.size());
      box_size.push_back(0);
      s.member_hits.push_back(0);
    }
    color[u] = chosen;
    ++box_size[chosen];
  }
  return static_cast<int>(box_size.size());
}

// Relabels box ids to first-appearance order over node indices.
void canonicalize(std::vector<int>& assignment, int n_boxes) {
  std::vector<int> remap(n_boxes, -1);
  int next = 0;
  for (int& c : assignment) {
    if (remap[c] < 0) remap[c] = next++;
    c = remap[c];
  }
}

BoxCover singleton_cover(const Graph& g) {
  BoxCover c;
  c.l_b = 1;
  c.n_boxes = g.node_count();
  c.assignment.resize(g.node_count());
  for (int i = 0; i < g.node_count(); ++i) c.assignment[i] = i;
  return c;
}

}  // namespace

BoxCover cover(const Graph& g, int l_b, std::uint64_t rng_seed, int restarts) {
  if (g.node_count() == 0) throw DomainError("cover: empty graph");
  if (l_b < 1) throw DomainError("cover: box length must be >= 1");
  if (restarts < 1) throw DomainError("cover: need >= 1 restart");
  if (l_b == 1) return singleton_cover(g);

  const int n = g.node_count();
  std::vector<std::vector<int>> results(restarts);
  std::vector<int> counts(restarts);
  parallel_for(restarts, [&](int r) {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    if (r > 0) {
      Rng rng(mix_seed(rng_seed, static_cast<std::uint64_t>(r)));
      rng.shuffle(order);
    }
    GreedyScratch scratch;
    counts[r] = greedy_cover_run(g, l_b, order, results[r], scratch);
  });

  int best = 0;
  for (int r = 1; r < restarts; ++r) {
    if (counts[r] < counts[best]) best = r;
  }
  BoxCover c;
  c.l_b = l_b;
  c.assignment = std::move(results[best]);
  c.n_boxes = counts[best];
  canonicalize(c.assignment, c.n_boxes);
  return c;
}

CoverCheck validate_cover(const Graph& g, const BoxCover& c) {
  const int n = g.node_count();
  if (static_cast<int>(c.assignment.size()) != n) {
    throw DomainError("validate_cover: cover was built for a different node set");
  }
  std::vector<std::vector<int>> members;
  for (int u = 0; u < n; ++u) {
    int b = c.assignment[u];
    if (b < 0 || b >= c.n_boxes) {
      throw DomainError("validate_cover: node '" + g.id_of(u) +
                        "' has out-of-range box id " + std::to_string(b));
    }
    if (b >= static_cast<int>(members.size())) members.resize(b + 1);
    members[b].push_back(u);
  }
  int non_empty = 0;
  for (const auto& m : members) {
    if (!m.empty()) ++non_empty;
  }
  if (non_empty != c.n_boxes) {
    return {false, "n_boxes=" + std::to_string(c.n_boxes) + " but " +
                       std::to_string(non_empty) + " distinct boxes used"};
  }

  for (const auto& box : members) {
    if (box.size() < 2) continue;
    for (int src : box) {
      auto dist = bfs_from(g, src);
      for (int other : box) {
        if (other == src) continue;
        if (dist[other] < 0 || dist[other] >= c.l_b) {
         return {false, "nodes '" + g.id_of(src) + "' and '" + g.id_of(other) +
                     "' share a box but are at distance " +
                     (dist[other] < 0 ? std::string("inf")
                                      : std::to_string(dist[other])) +
                     " >= l_B=" + std::to_string(c.l_b)};
        }
      }
    }
  }
  return {};
}

BoxCountSeries box_counts(const Graph& g, int l_b_max, std::uint64_t rng_seed,
                          int restarts) {
  if (l_b_max < 2) throw DomainError("box_counts: l_b_max must be >= 2");
  if (g.node_count() == 0) throw DomainError("box_counts: empty graph");

  BoxCountSeries series;
  series.source_nodes = g.node_count();
  series.components = connected_components(g).count;
  series.entries.emplace_back(1, static_cast<double>(g.node_count()));

  BoxCover best_so_far = singleton_cover(g);
  for (int l_b = 2; l_b <= l_b_max; ++l_b) {
    BoxCover c = cover(g, l_b, mix_seed(rng_seed, static_cast<std::uint64_t>(l_b)),
                       restarts);
    if (c.n_boxes <= best_so_far.n_boxes) {
      best_so_far = std::move(c);
    }
    // else the earlier cover is still valid at this l_b and smaller
    series.entries.emplace_back(l_b, static_cast<double>(best_so_far.n_boxes));
  }
  return series;
}

void write_box_counts(const std::filesystem::path& path,
                      const BoxCountSeries& series) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "l_B,N_boxes\n";
  for (const auto& [l_b, n] : series.entries) {
    double rounded = std::round(n);
    out << l_b << ',';
    if (n == rounded) {
      out << static_cast<long long>(rounded);
    } else {
      char buf[64];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), n);
      out.write(buf, ptr - buf);
    }
    out << '\n';
  }
}

BoxCountSeries read_box_counts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  BoxCountSeries series;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (line_no == 1 && line.rfind("l_B", 0) == 0) continue;  // header
    std::istringstream ss(line);
    std::string lb_str, n_str;
    if (!std::getline(ss, lb_str, ',') || !std::getline(ss, n_str, ',')) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": expected 'l_B,N_boxes'");
    }
    int l_b = 0;
    double n = 0.0;
    auto r1 = std::from_chars(lb_str.data(), lb_str.data() + lb_str.size(), l_b);
    auto r2 = std::from_chars(n_str.data(), n_str.data() + n_str.size(), n);
    if (r1.ec != std::errc{} || r2.ec != std::errc{}) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": bad numeric value in '" + line + "'");
    }
    series.entries.emplace_back(l_b, n);
  }
  std::sort(series.entries.begin(), series.entries.end());
  for (const auto& [l_b, n] : series.entries) {
    if (l_b == 1) series.source_nodes = static_cast<int>(std::llround(n));
  }
  if (series.source_nodes == 0 && !series.entries.empty()) {
    series.source_nodes =
        static_cast<int>(std::llround(series.entries.front().second));
  }
  return series;
}

void write_cover(const std::filesystem::path& path, const Graph& g,
                 const BoxCover& c) {
  if (static_cast<int>(c.assignment.size()) != g.node_count()) {
    throw DomainError("write_cover: cover does not match graph");
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "node_id,box_id\n";
  for (int u = 0; u < g.node_count(); ++u) {
    out << g.id_of(u) << ',' << c.assignment[u] << '\n';
  }
}

}  // namespace netscale

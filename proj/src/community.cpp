#include "netscale/community.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "netscale/error.hpp"
#include "netscale/graph_io.hpp"

namespace netscale {

CommunityPartition communities_from_cover(const Graph& g, const BoxCover& c) {
  if (static_cast<int>(c.assignment.size()) != g.node_count()) {
    throw DomainError("communities_from_cover: cover does not match graph");
  }
  std::vector<std::vector<std::string>> groups(c.n_boxes);
  for (int u = 0; u < g.node_count(); ++u) {
    groups[c.assignment[u]].push_back(g.id_of(u));
  }
  for (auto& members : groups) std::sort(members.begin(), members.end());
  std::sort(groups.begin(), groups.end(),
            [](const auto& a, const auto& b) {
              if (a.size() != b.size()) return a.size() > b.size();
              return a.front() < b.front();
            });

  CommunityPartition p;
  p.l_b = c.l_b;
  p.degenerate_singletons = c.l_b == 1;
  p.communities = std::move(groups);
  for (std::size_t i = 0; i < p.communities.size(); ++i) {
    for (const auto& id : p.communities[i]) {
      p.community_of.emplace(id, static_cast<int>(i));
    }
  }
  return p;
}

CommunityWebCounts community_web_counts(
    const EventTrace& trace, const CommunityPartition& partition,
    std::optional<std::int64_t> window_seconds) {
  CommunityWebCounts counts;
  counts.n_communities = static_cast<int>(partition.communities.size());

  const std::string* cur_user = nullptr;
  int cur_community = -1;
  std::int64_t cur_loc_time = 0;
  for (const auto& rec : trace.records) {
    if (!cur_user || *cur_user != rec.user) {
      cur_user = &rec.user;
      cur_community = -1;
    }
    if (rec.kind == EventKind::Location) {
      auto it = partition.community_of.find(rec.symbol);
      cur_community = it == partition.community_of.end() ? -1 : it->second;
      cur_loc_time = rec.timestamp;
    } else {
      const bool in_window =
          !window_seconds || rec.timestamp - cur_loc_time <= *window_seconds;
      if (cur_community >= 0 && in_window) {
        ++counts.tf[{cur_community, rec.symbol}];
        ++counts.attributed;
      } else {
        ++counts.unattributed;
      }
    }
  }
  if (counts.attributed == 0) {
    throw DomainError(
        "community_web_counts: no web record could be attributed to a "
        "community");
  }
  return counts;
}

TfIdfTable tf_idf(const CommunityWebCounts& counts) {
  if (counts.n_communities < 2) {
    throw DomainError("tf_idf: need >= 2 communities");
  }
  TfIdfTable table;
  table.n_communities = counts.n_communities;

  std::map<std::string, int> df;
  for (const auto& [key, tf] : counts.tf) {
    if (tf > 0) ++df[key.second];
  }
  for (const auto& [website, d] : df) {
    table.idf[website] =
        std::log(static_cast<double>(counts.n_communities) / d);
  }
  for (const auto& [key, tf] : counts.tf) {
    if (tf <= 0) continue;
    TfIdfCell cell;
    cell.community = key.first;
    cell.website = key.second;
    cell.tf = static_cast<double>(tf);
    cell.idf = table.idf[key.second];
    cell.score = cell.tf * cell.idf;
    table.cells.push_back(std::move(cell));
  }
  return table;
}

TopWebsites top_websites(const TfIdfTable& table, int community, int k) {
  if (community < 0 || community >= table.n_communities) {
    throw DomainError("top_websites: unknown community " +
                      std::to_string(community));
  }
  std::vector<std::pair<std::string, double>> scored;
  bool saw_any = false;
  for (const auto& cell : table.cells) {
    if (cell.community != community) continue;
    saw_any = true;
    if (cell.score > 0.0) scored.emplace_back(cell.website, cell.score);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (k >= 0 && scored.size() > static_cast<std::size_t>(k)) {
    scored.resize(static_cast<std::size_t>(k));
  }
  TopWebsites top;
  top.ranked = std::move(scored);
  if (top.ranked.empty()) {
    top.warning = saw_any ? "all scores are zero for community " +
                                std::to_string(community)
                          : "community " + std::to_string(community) +
                                " has no attributed web visits";
  }
  return top;
}

void write_partition(const std::filesystem::path& path,
                     const CommunityPartition& partition) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "node_id,community_id\n";
  for (std::size_t c = 0; c < partition.communities.size(); ++c) {
    for (const auto& id : partition.communities[c]) {
      out << id << ',' << c << '\n';
    }
  }
}

void write_tfidf(const std::filesystem::path& path, const TfIdfTable& table) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "community,website,tf,idf,score\n";
  for (const auto& cell : table.cells) {
    out << cell.community << ',' << cell.website << ','
        << format_double(cell.tf) << ',' << format_double(cell.idf) << ','
        << format_double(cell.score) << '\n';
  }
}

void write_top_websites_json(const std::filesystem::path& path,
                             const TfIdfTable& table, int top_k) {
  nlohmann::json communities = nlohmann::json::array();
  for (int c = 0; c < table.n_communities; ++c) {
    TopWebsites top = top_websites(table, c, top_k);
    nlohmann::json ranked = nlohmann::json::array();
    for (const auto& [website, score] : top.ranked) {
      ranked.push_back({{"website", website}, {"score", score}});
    }
    nlohmann::json j{{"community", c}, {"top", std::move(ranked)}};
    if (!top.warning.empty()) j["warning"] = top.warning;
    communities.push_back(std::move(j));
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << nlohmann::json{{"schema", "netscale.top_websites/1"},
                        {"communities", std::move(communities)}}
             .dump(2)
      << '\n';
}

}  // namespace netscale

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "netscale/box_cover.hpp"
#include "netscale/graph.hpp"
#include "netscale/trace.hpp"

namespace netscale {

// Boxes reinterpreted as spatial communities, ranked by size (largest first,
// ties by smallest member id).
struct CommunityPartition {
  int l_b = 0;
  std::vector<std::vector<std::string>> communities;  // sorted member ids
  std::unordered_map<std::string, int> community_of;
  bool degenerate_singletons = false;  // l_b == 1 gives one box per node
};

CommunityPartition communities_from_cover(const Graph& g, const BoxCover& c);

struct CommunityWebCounts {
  int n_communities = 0;
  std::map<std::pair<int, std::string>, std::int64_t> tf;
  std::int64_t attributed = 0;
  std::int64_t unattributed = 0;
};

// Attributes each web visit to the community of the user's most recent
// location visit; an optional look-back window (seconds) bounds how stale
// that location may be. Web records with no usable location context count as
// unattributed.
CommunityWebCounts community_web_counts(
    const EventTrace& trace, const CommunityPartition& partition,
    std::optional<std::int64_t> window_seconds = {});

struct TfIdfCell {
  int community = 0;
  std::string website;
  double tf = 0.0;
  double idf = 0.0;
  double score = 0.0;
};

struct TfIdfTable {
  int n_communities = 0;
  std::map<std::string, double> idf;  // per website
  std::vector<TfIdfCell> cells;       // ordered by (community, website)
};

// tf = raw visit count, idf = ln(#communities / #communities containing the
// website), score = tf * idf. A website present in every community scores
// exactly zero.
TfIdfTable tf_idf(const CommunityWebCounts& counts);

struct TopWebsites {
  std::vector<std::pair<std::string, double>> ranked;
  std::string warning;  // set when every score was zero
};

// k best-scoring websites of one community; ties break lexicographically.
TopWebsites top_websites(const TfIdfTable& table, int community, int k);

void write_partition(const std::filesystem::path& path,
                     const CommunityPartition& partition);
void write_tfidf(const std::filesystem::path& path, const TfIdfTable& table);
void write_top_websites_json(const std::filesystem::path& path,
                             const TfIdfTable& table, int top_k);

}  // namespace netscale

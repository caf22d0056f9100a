#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "netscale/graph.hpp"

namespace netscale {

// Edge-list format: one whitespace-separated id pair per line, '#' comments
// and blank lines ignored.
std::vector<std::pair<std::string, std::string>> read_edge_list(
    std::istream& in, const std::string& source_name = "<stream>");
std::vector<std::pair<std::string, std::string>> read_edge_list_file(
    const std::filesystem::path& path);

// Node metadata: id<TAB>x<TAB>y<TAB>label per line; x, y, label may be empty.
std::unordered_map<std::string, NodeMeta> read_node_meta(
    std::istream& in, const std::string& source_name = "<stream>");
std::unordered_map<std::string, NodeMeta> read_node_meta_file(
    const std::filesystem::path& path);

Graph load_graph(const std::filesystem::path& edge_path,
                 const std::filesystem::path& meta_path = {},
                 BuildReport* report = nullptr);

void write_edge_list(std::ostream& out, const Graph& g);
void write_edge_list_file(const std::filesystem::path& path, const Graph& g);
void write_node_meta(std::ostream& out, const Graph& g);
void write_node_meta_file(const std::filesystem::path& path, const Graph& g);

// Shortest round-trip decimal rendering; used everywhere a float lands in a
// data file so reruns stay byte-identical.
std::string format_double(double value);

}  // namespace netscale

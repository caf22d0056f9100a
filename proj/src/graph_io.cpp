#include "netscale/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "netscale/error.hpp"

namespace netscale {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

bool parse_double(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::vector<std::pair<std::string, std::string>> read_edge_list(
    std::istream& in, const std::string& source_name) {
  std::vector<std::pair<std::string, std::string>> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string a, b, extra;
    if (!(ss >> a) || a[0] == '#') continue;
    if (!(ss >> b)) {
      throw FormatError(source_name + ":" + std::to_string(line_no) +
                        ": expected an id pair, got '" + line + "'");
    }
    if (ss >> extra && extra[0] != '#') {
      throw FormatError(source_name + ":" + std::to_string(line_no) +
                        ": trailing tokens after id pair");
    }
    edges.emplace_back(std::move(a), std::move(b));
  }
  return edges;
}

std::vector<std::pair<std::string, std::string>> read_edge_list_file(
    const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_edge_list(in, path.string());
}

std::unordered_map<std::string, NodeMeta> read_node_meta(
    std::istream& in, const std::string& source_name) {
  std::unordered_map<std::string, NodeMeta> meta;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.empty() || fields[0].empty()) {
      throw FormatError(source_name + ":" + std::to_string(line_no) +
                        ": node metadata line without id");
    }
    NodeMeta m;
    if (fields.size() >= 3 && !fields[1].empty() && !fields[2].empty()) {
      Point p;
      if (!parse_double(fields[1], p.x) || !parse_double(fields[2], p.y)) {
        throw FormatError(source_name + ":" + std::to_string(line_no) +
                          ": bad coordinate value");
      }
      m.coord = p;
    }
    if (fields.size() >= 4) m.label = fields[3];
    meta[fields[0]] = std::move(m);
  }
  return meta;
}

std::unordered_map<std::string, NodeMeta> read_node_meta_file(
    const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_node_meta(in, path.string());
}

Graph load_graph(const std::filesystem::path& edge_path,
                 const std::filesystem::path& meta_path, BuildReport* report) {
  auto edges = read_edge_list_file(edge_path);
  if (edges.empty()) {
    throw FormatError("'" + edge_path.string() + "' contains no edges");
  }
  std::unordered_map<std::string, NodeMeta> meta;
  if (!meta_path.empty()) meta = read_node_meta_file(meta_path);
  return build_graph(edges, meta, report);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  for (const auto& [a, b] : g.edges_by_id()) {
    out << a << ' ' << b << '\n';
  }
}

void write_edge_list_file(const std::filesystem::path& path, const Graph& g) {
  auto out = open_output(path);
  write_edge_list(out, g);
}

void write_node_meta(std::ostream& out, const Graph& g) {
  for (int u = 0; u < g.node_count(); ++u) {
    out << g.id_of(u) << '\t';
    if (const auto& c = g.coord(u)) {
      out << format_double(c->x) << '\t' << format_double(c->y);
    } else {
      out << '\t';
    }
    out << '\t' << g.label(u) << '\n';
  }
}

void write_node_meta_file(const std::filesystem::path& path, const Graph& g) {
  auto out = open_output(path);
  write_node_meta(out, g);
}

}  // namespace netscale

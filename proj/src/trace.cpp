#include "netscale/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "netscale/error.hpp"
#include "netscale/graph_io.hpp"
#include "netscale/stats.hpp"

namespace netscale {

namespace {

constexpr const char* kHeader = "user_id,timestamp,kind,symbol,x,y";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

bool parse_i64(const std::string& s, std::int64_t& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc{} && p == e && !s.empty();
}

bool parse_f64(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc{} && p == e && !s.empty();
}

}  // namespace

EventTrace parse_trace(std::istream& in, TraceReport* report,
                       const std::string& source_name) {
  TraceReport local;
  TraceReport& rep = report ? *report : local;
  EventTrace trace;

  std::string line;
  if (!std::getline(in, line)) {
    return trace;  // zero-byte stream: empty trace, zero-record report
  }
  if (strip_cr(line) != kHeader) {
    throw FormatError(source_name + ":1: expected header '" +
                      std::string(kHeader) + "', got '" + line + "'");
  }

  std::size_t line_no = 1;
  auto note = [&](const std::string& why) {
    ++rep.rows_malformed;
    if (rep.warnings.size() < 20) {
      rep.warnings.push_back(source_name + ":" + std::to_string(line_no) +
                             ": " + why);
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    ++rep.rows_total;
    auto fields = split_csv(line);
    if (fields.size() != 6) {
      note("expected 6 fields, got " + std::to_string(fields.size()));
      continue;
    }
    EventRecord rec;
    rec.user = fields[0];
    if (rec.user.empty()) {
      note("empty user_id");
      continue;
    }
    if (!parse_i64(fields[1], rec.timestamp)) {
      note("bad timestamp '" + fields[1] + "'");
      continue;
    }
    if (fields[2] == "location") {
      rec.kind = EventKind::Location;
    } else if (fields[2] == "web") {
      rec.kind = EventKind::Web;
    } else {
      note("bad kind '" + fields[2] + "'");
      continue;
    }
    rec.symbol = fields[3];
    if (rec.symbol.empty()) {
      note("empty symbol");
      continue;
    }
    const bool has_x = !fields[4].empty();
    const bool has_y = !fields[5].empty();
    if (has_x != has_y) {
      note("coordinate must provide both x and y");
      continue;
    }
    if (has_x) {
      Point p;
      if (!parse_f64(fields[4], p.x) || !parse_f64(fields[5], p.y)) {
        note("bad coordinate values");
        continue;
      }
      rec.coord = p;
    }
    trace.records.push_back(std::move(rec));
    ++rep.rows_kept;
  }

  if (rep.rows_total > 0 && rep.rows_malformed * 2 > rep.rows_total) {
    std::string diag;
    for (const auto& w : rep.warnings) diag += "\n  " + w;
    throw FormatError(source_name + ": " + std::to_string(rep.rows_malformed) +
                      " of " + std::to_string(rep.rows_total) +
                      " rows malformed" + diag);
  }

  std::stable_sort(trace.records.begin(), trace.records.end(),
                   [](const EventRecord& a, const EventRecord& b) {
                     if (a.user != b.user) return a.user < b.user;
                     return a.timestamp < b.timestamp;
                   });
  return trace;
}

EventTrace parse_trace_file(const std::filesystem::path& path,
                            TraceReport* report) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  return parse_trace(in, report, path.string());
}

namespace {

Graph build_transition_network(const EventTrace& trace, EventKind kind,
                               const NetworkBuildOptions& options,
                               const char* kind_name) {
  GraphBuilder builder;
  bool any = false;
  const std::string* prev_user = nullptr;
  const std::string* prev_symbol = nullptr;
  std::int64_t prev_time = 0;
  for (const auto& rec : trace.records) {
    if (rec.kind != kind) continue;
    any = true;
    NodeMeta meta;
    meta.coord = rec.coord;
    builder.add_node(rec.symbol, meta);
    const bool same_user = prev_user && *prev_user == rec.user;
    if (same_user && *prev_symbol != rec.symbol) {
      const bool within_gap =
          !options.session_gap_seconds ||
          rec.timestamp - prev_time <= *options.session_gap_seconds;
      if (within_gap) builder.add_edge(*prev_symbol, rec.symbol);
    }
    prev_user = &rec.user;
    prev_symbol = &rec.symbol;
    prev_time = rec.timestamp;
  }
  if (!any) {
    throw DomainError(std::string("trace contains no ") + kind_name +
                      " records");
  }
  return builder.build();
}

}  // namespace

Graph build_mobility_network(const EventTrace& trace,
                             const NetworkBuildOptions& options) {
  return build_transition_network(trace, EventKind::Location, options,
                                  "location");
}

Graph build_attention_network(const EventTrace& trace,
                              const NetworkBuildOptions& options) {
  return build_transition_network(trace, EventKind::Web, options, "web");
}

std::vector<UserStats> user_statistics(const EventTrace& trace) {
  if (trace.records.empty()) throw DomainError("user_statistics: empty trace");

  std::vector<UserStats> out;
  std::unordered_set<std::string> stations, websites;
  const std::string* prev_station = nullptr;
  std::optional<Point> prev_station_coord;
  const std::string* prev_website = nullptr;

  auto flush = [&](UserStats& cur) {
    cur.unique_stations = static_cast<std::int64_t>(stations.size());
    cur.unique_websites = static_cast<std::int64_t>(websites.size());
    out.push_back(cur);
    stations.clear();
    websites.clear();
    prev_station = nullptr;
    prev_station_coord.reset();
    prev_website = nullptr;
  };

  UserStats cur;
  for (const auto& rec : trace.records) {
    if (cur.user != rec.user) {
      if (!cur.user.empty()) flush(cur);
      cur = UserStats{};
      cur.user = rec.user;
    }
    ++cur.total_records;
    if (rec.kind == EventKind::Location) {
      stations.insert(rec.symbol);
      if (prev_station && *prev_station != rec.symbol) {
        ++cur.sequential_stations;
        if (prev_station_coord && rec.coord) {
          const double dx = rec.coord->x - prev_station_coord->x;
          const double dy = rec.coord->y - prev_station_coord->y;
          cur.total_distance += std::sqrt(dx * dx + dy * dy);
        }
      }
      prev_station = &rec.symbol;
      prev_station_coord = rec.coord;
    } else {
      websites.insert(rec.symbol);
      if (prev_website && *prev_website != rec.symbol) {
        ++cur.sequential_websites;
      }
      prev_website = &rec.symbol;
    }
  }
  flush(cur);
  return out;
}

void write_user_stats(const std::filesystem::path& path,
                      const std::vector<UserStats>& stats) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "user_id,total_records,unique_stations,sequential_stations,"
         "total_distance,unique_websites,sequential_websites\n";
  for (const auto& s : stats) {
    out << s.user << ',' << s.total_records << ',' << s.unique_stations << ','
        << s.sequential_stations << ',' << format_double(s.total_distance)
        << ',' << s.unique_websites << ',' << s.sequential_websites << '\n';
  }
}

std::map<std::string, std::vector<double>> stats_columns(
    const std::vector<UserStats>& stats) {
  std::map<std::string, std::vector<double>> cols;
  for (const auto& s : stats) {
    cols["total_records"].push_back(static_cast<double>(s.total_records));
    cols["unique_stations"].push_back(static_cast<double>(s.unique_stations));
    cols["sequential_stations"].push_back(
        static_cast<double>(s.sequential_stations));
    cols["total_distance"].push_back(s.total_distance);
    cols["unique_websites"].push_back(static_cast<double>(s.unique_websites));
    cols["sequential_websites"].push_back(
        static_cast<double>(s.sequential_websites));
  }
  return cols;
}

std::vector<CorrelationCell> cross_correlations(
    const std::map<std::string, std::vector<double>>& columns,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<CorrelationCell> cells;
  for (const auto& [name_a, name_b] : pairs) {
    auto ita = columns.find(name_a);
    auto itb = columns.find(name_b);
    if (ita == columns.end() || itb == columns.end()) {
      throw DomainError("cross_correlations: unknown variable '" +
                        (ita == columns.end() ? name_a : name_b) + "'");
    }
    const auto& xs = ita->second;
    const auto& ys = itb->second;
    if (xs.size() != ys.size() || xs.size() < 3) {
      throw DomainError("cross_correlations: need >= 3 users per variable");
    }
    CorrelationCell cell;
    cell.var_a = name_a;
    cell.var_b = name_b;
    cell.raw_points = static_cast<int>(xs.size());
    cell.raw_pearson = pearson(xs, ys);

    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] > 0.0 && ys[i] > 0.0) {
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(ys[i]));
      } else {
        ++cell.excluded_nonpositive;
      }
    }
    cell.log_points = static_cast<int>(lx.size());
    if (lx.size() < 3) {
      cell.insufficient = true;
    } else {
      cell.log_pearson = pearson(lx, ly);
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

void write_correlations_json(const std::filesystem::path& path,
                             const std::vector<CorrelationCell>& cells) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : cells) {
    nlohmann::json j{{"var_a", c.var_a},
                     {"var_b", c.var_b},
                     {"log_points", c.log_points},
                     {"excluded_nonpositive", c.excluded_nonpositive},
                     {"raw_points", c.raw_points},
                     {"insufficient", c.insufficient}};
    j["log_pearson"] =
        c.log_pearson ? nlohmann::json(*c.log_pearson) : nlohmann::json();
    j["raw_pearson"] =
        c.raw_pearson ? nlohmann::json(*c.raw_pearson) : nlohmann::json();
    arr.push_back(std::move(j));
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << nlohmann::json{{"schema", "netscale.correlations/1"},
                        {"correlations", std::move(arr)}}
             .dump(2)
      << '\n';
}

std::vector<TailFit> fit_user_tails(const std::vector<UserStats>& stats) {
  if (stats.size() < 50) {
    throw DomainError("fit_user_tails: need >= 50 users for a stable fit");
  }
  auto columns = stats_columns(stats);
  std::vector<TailFit> fits;
  for (const auto& [name, values] : columns) {
    TailFit tf;
    tf.variable = name;
    std::vector<std::int64_t> ints;
    ints.reserve(values.size());
    for (double v : values) {
      const auto r = std::llround(v);
      if (r >= 1) ints.push_back(r);
    }
    try {
      tf.fit = fit_degree_exponent(ints);
    } catch (const DomainError& e) {
      tf.degenerate = true;
      tf.note = e.what();
    }
    fits.push_back(std::move(tf));
  }
  return fits;
}

void write_tail_fits_json(const std::filesystem::path& path,
                          const std::vector<TailFit>& fits) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& f : fits) {
    nlohmann::json j{{"variable", f.variable}, {"degenerate", f.degenerate}};
    if (f.fit) {
      j["gamma"] = f.fit->gamma;
      j["xmin"] = f.fit->xmin;
      j["ks_statistic"] = f.fit->ks_statistic;
      j["n_tail"] = f.fit->n_tail;
    }
    if (!f.note.empty()) j["note"] = f.note;
    arr.push_back(std::move(j));
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << nlohmann::json{{"schema", "netscale.tail_fits/1"},
                        {"tail_fits", std::move(arr)}}
             .dump(2)
      << '\n';
}

}  // namespace netscale

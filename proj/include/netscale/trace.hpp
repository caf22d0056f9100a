#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netscale/graph.hpp"
#include "netscale/scaling_fit.hpp"

namespace netscale {

enum class EventKind { Location, Web };

struct EventRecord {
  std::string user;
  std::int64_t timestamp = 0;  // seconds since epoch
  EventKind kind = EventKind::Location;
  std::string symbol;  // base-station id or website
  std::optional<Point> coord;
};

// Per-user time-ordered event log; ties keep input order.
struct EventTrace {
  std::vector<EventRecord> records;
};

struct TraceReport {
  std::size_t rows_total = 0;
  std::size_t rows_kept = 0;
  std::size_t rows_malformed = 0;
  std::vector<std::string> warnings;  // first few diagnostics
};

// CSV with header `user_id,timestamp,kind,symbol,x,y`; kind is location|web;
// x,y may be empty. Malformed rows are dropped and counted; more than half
// malformed aborts with diagnostics. A zero-byte stream is an empty trace.
EventTrace parse_trace(std::istream& in, TraceReport* report = nullptr,
                       const std::string& source_name = "<stream>");
EventTrace parse_trace_file(const std::filesystem::path& path,
                            TraceReport* report = nullptr);

struct NetworkBuildOptions {
  // Transitions spanning a longer pause than this are not edges; unset means
  // no session breaking.
  std::optional<std::int64_t> session_gap_seconds;
};

// Locations as nodes; an edge joins each pair of consecutive distinct
// locations in one user's timeline. Coordinates come from the first record
// carrying them.
Graph build_mobility_network(const EventTrace& trace,
                             const NetworkBuildOptions& options = {});

// Same transition rule over website visits.
Graph build_attention_network(const EventTrace& trace,
                              const NetworkBuildOptions& options = {});

struct UserStats {
  std::string user;
  std::int64_t total_records = 0;
  std::int64_t unique_stations = 0;
  std::int64_t sequential_stations = 0;  // consecutive-distinct transitions
  double total_distance = 0.0;
  std::int64_t unique_websites = 0;
  std::int64_t sequential_websites = 0;
};

std::vector<UserStats> user_statistics(const EventTrace& trace);

void write_user_stats(const std::filesystem::path& path,
                      const std::vector<UserStats>& stats);

// Named columns over users, in user order; input to the correlation table.
std::map<std::string, std::vector<double>> stats_columns(
    const std::vector<UserStats>& stats);

struct CorrelationCell {
  std::string var_a;
  std::string var_b;
  std::optional<double> log_pearson;  // over log-transformed positive pairs
  int log_points = 0;
  int excluded_nonpositive = 0;
  std::optional<double> raw_pearson;  // untransformed, for transparency
  int raw_points = 0;
  bool insufficient = false;  // fewer than 3 usable log-scale points
};

std::vector<CorrelationCell> cross_correlations(
    const std::map<std::string, std::vector<double>>& columns,
    const std::vector<std::pair<std::string, std::string>>& pairs);

void write_correlations_json(const std::filesystem::path& path,
                             const std::vector<CorrelationCell>& cells);

struct TailFit {
  std::string variable;
  bool degenerate = false;
  std::optional<DegreeExponent> fit;
  std::string note;
};

// Power-law tail fit per user variable. Distances round to the nearest
// positive integer for the discrete estimator; zeros are excluded.
std::vector<TailFit> fit_user_tails(const std::vector<UserStats>& stats);

void write_tail_fits_json(const std::filesystem::path& path,
                          const std::vector<TailFit>& fits);

}  // namespace netscale

// netscale: renormalization, scaling classification and spatial-growth
// models for location/attention networks, driven from the command line.
// Every command writes its data files plus a manifest.json with input and
// output digests; identical seeds and inputs give byte-identical outputs.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "netscale/box_cover.hpp"
#include "netscale/community.hpp"
#include "netscale/error.hpp"
#include "netscale/geo_model.hpp"
#include "netscale/graph.hpp"
#include "netscale/graph_io.hpp"
#include "netscale/manifest.hpp"
#include "netscale/parallel.hpp"
#include "netscale/renorm.hpp"
#include "netscale/scaling_fit.hpp"
#include "netscale/trace.hpp"

namespace fs = std::filesystem;
using namespace netscale;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;
  bool strict = false;
  std::string output_dir = ".";
};

// Accumulates the manifest while a command runs.
class Run {
 public:
  Run(const GlobalOpts& g, std::string command) : global_(g) {
    manifest_.command = std::move(command);
    manifest_.rng_seed = g.seed;
    start_ = std::chrono::steady_clock::now();
    fs::create_directories(g.output_dir);
  }

  fs::path out_path(const std::string& name) const {
    return fs::path(global_.output_dir) / name;
  }

  void config(const std::string& key, const std::string& value) {
    manifest_.config[key] = value;
  }

  void input(const fs::path& path) {
    manifest_.input_digests[path.string()] = digest_file(path);
  }

  void output(const fs::path& path) {
    manifest_.outputs.emplace_back(path.string(), digest_file(path));
  }

  void finish() {
    manifest_.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    write_manifest(out_path("manifest.json"), manifest_);
  }

 private:
  const GlobalOpts& global_;
  RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

void require_seed(const GlobalOpts& g, const std::string& command) {
  if (g.strict && !g.seed_given) {
    throw DomainError("--strict mode: '" + command +
                      "' is randomized and needs an explicit --seed");
  }
}

std::vector<std::pair<std::string, std::string>> all_variable_pairs() {
  const std::vector<std::string> vars = {
      "total_records",  "unique_stations", "sequential_stations",
      "total_distance", "unique_websites", "sequential_websites"};
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    for (std::size_t j = i + 1; j < vars.size(); ++j) {
      pairs.emplace_back(vars[i], vars[j]);
    }
  }
  return pairs;
}

int cmd_ingest(const GlobalOpts& g, const std::string& trace_path,
               std::optional<std::int64_t> session_gap) {
  Run run(g, "ingest");
  run.config("trace", trace_path);
  if (session_gap) run.config("session_gap", std::to_string(*session_gap));
  run.input(trace_path);

  TraceReport report;
  EventTrace trace = parse_trace_file(trace_path, &report);
  if (trace.records.empty()) {
    throw FormatError("'" + trace_path + "': trace is empty");
  }
  NetworkBuildOptions opts;
  opts.session_gap_seconds = session_gap;

  Graph mobility = build_mobility_network(trace, opts);
  Graph attention = build_attention_network(trace, opts);
  auto stats = user_statistics(trace);

  write_edge_list_file(run.out_path("mobility.edges"), mobility);
  write_node_meta_file(run.out_path("mobility.nodes"), mobility);
  write_edge_list_file(run.out_path("attention.edges"), attention);
  write_node_meta_file(run.out_path("attention.nodes"), attention);
  write_user_stats(run.out_path("user_stats.csv"), stats);
  for (const char* f : {"mobility.edges", "mobility.nodes", "attention.edges",
                        "attention.nodes", "user_stats.csv"}) {
    run.output(run.out_path(f));
  }
  run.finish();

  std::cout << "mobility: " << mobility.node_count() << " nodes, "
            << mobility.edge_count() << " edges\n"
            << "attention: " << attention.node_count() << " nodes, "
            << attention.edge_count() << " edges\n"
            << "users: " << stats.size()
            << ", malformed rows: " << report.rows_malformed << "\n";
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

int cmd_boxcount(const GlobalOpts& g, const std::string& edges_path,
                 int lb_max, int restarts) {
  require_seed(g, "boxcount");
  Run run(g, "boxcount");
  run.config("edges", edges_path);
  run.config("lb_max", std::to_string(lb_max));
  run.config("restarts", std::to_string(restarts));
  run.input(edges_path);

  Graph graph = load_graph(edges_path);
  BoxCountSeries series = box_counts(graph, lb_max, g.seed, restarts);
  write_box_counts(run.out_path("box_counts.csv"), series);
  run.output(run.out_path("box_counts.csv"));
  run.finish();

  std::cout << "covered " << graph.node_count() << " nodes up to l_B="
            << lb_max << "; N(" << lb_max << ")="
            << series.entries.back().second << "\n";
  return 0;
}

int cmd_classify(const GlobalOpts& g, const std::string& counts_path) {
  Run run(g, "classify");
  run.config("box_counts", counts_path);
  run.input(counts_path);

  BoxCountSeries series = read_box_counts(counts_path);
  ScalingClass sc = classify_topology(series);
  write_fit_json(run.out_path("classify.json"), sc);
  run.output(run.out_path("classify.json"));
  run.finish();

  std::cout << (sc.verdict == TopologyClass::Fractal ? "FRACTAL" : "SMALL_WORLD")
            << (sc.ambiguous ? " (ambiguous)" : "") << ": power r2="
            << sc.power_fit.r_squared << ", exponential r2="
            << sc.exp_fit.r_squared << "\n";
  return 0;
}

int cmd_renorm(const GlobalOpts& g, const std::string& edges_path,
               const std::string& mode, int l_b, int lb_min, int lb_max,
               int restarts, bool dump_stages) {
  require_seed(g, "renorm");
  Run run(g, "renorm");
  run.config("edges", edges_path);
  run.config("mode", mode);
  run.config("restarts", std::to_string(restarts));
  run.input(edges_path);

  Graph graph = load_graph(edges_path);
  if (mode == "once") {
    run.config("lb", std::to_string(l_b));
    BoxCover c = cover(graph, l_b, g.seed, restarts);
    Graph collapsed = collapse(graph, c);
    write_cover(run.out_path("cover.csv"), graph, c);
    write_edge_list_file(run.out_path("collapsed.edges"), collapsed);
    write_node_meta_file(run.out_path("collapsed.nodes"), collapsed);
    nlohmann::json j{{"schema", "netscale.renorm_once/1"},
                     {"l_B", l_b},
                     {"boxes", c.n_boxes},
                     {"nodes", collapsed.node_count()},
                     {"edges", collapsed.edge_count()}};
    try {
      auto knn = knn_profile(collapsed);
      j["pearson"] = knn.pearson ? nlohmann::json(*knn.pearson)
                                 : nlohmann::json();
    } catch (const DomainError&) {
      j["pearson"] = nullptr;
    }
    std::ofstream out(run.out_path("renorm_once.json"));
    out << j.dump(2) << '\n';
    out.close();
    run.output(run.out_path("cover.csv"));
    run.output(run.out_path("collapsed.edges"));
    run.output(run.out_path("collapsed.nodes"));
    run.output(run.out_path("renorm_once.json"));
    std::cout << c.n_boxes << " boxes at l_B=" << l_b << "\n";
  } else if (mode == "flow") {
    run.config("lb", std::to_string(l_b));
    auto flows = renormalization_flow(graph, l_b, g.seed, restarts);
    write_flows_json(run.out_path("flow.json"), flows);
    run.output(run.out_path("flow.json"));
    if (dump_stages) {
      for (std::size_t f = 0; f < flows.size(); ++f) {
        for (std::size_t s = 0; s < flows[f].stages.size(); ++s) {
          std::string name = "flow" + std::to_string(f) + "_stage" +
                             std::to_string(s) + ".edges";
          write_edge_list_file(run.out_path(name), flows[f].stages[s].graph);
          run.output(run.out_path(name));
        }
      }
    }
    std::cout << flows.size() << " flow(s); steps:";
    for (const auto& f : flows) std::cout << ' ' << f.steps;
    std::cout << "\n";
  } else if (mode == "sweep") {
    run.config("lb_min", std::to_string(lb_min));
    run.config("lb_max", std::to_string(lb_max));
    auto series = correlation_vs_lb(graph, lb_min, lb_max, g.seed, restarts);
    write_correlation_series(run.out_path("correlation_vs_lb.csv"), series);
    run.output(run.out_path("correlation_vs_lb.csv"));
    std::cout << "swept l_B in [" << lb_min << ", " << lb_max << "]\n";
  } else {
    throw DomainError("renorm: unknown mode '" + mode +
                      "' (expected once|flow|sweep)");
  }
  run.finish();
  return 0;
}

int cmd_generate(const GlobalOpts& g, const std::string& rule, int n,
                 double radius, double arena,
                 const std::vector<int>& checkpoints,
                 long long max_rejections) {
  require_seed(g, "generate");
  Run run(g, "generate");
  run.config("rule", rule);
  run.config("n", std::to_string(n));
  run.config("radius", format_double(radius));
  run.config("arena", format_double(arena));
  run.config("max_rejections", std::to_string(max_rejections));

  GeoModelConfig config;
  config.rule = parse_attach_rule(rule);
  config.target_nodes = n;
  config.radius = radius;
  config.arena_side = arena;
  config.rng_seed = g.seed;
  config.max_rejections = max_rejections;

  GeoGraph gg = grow(config);
  write_edge_list_file(run.out_path("model.edges"), gg.graph);
  write_node_meta_file(run.out_path("model.nodes"), gg.graph);
  write_growth_log(run.out_path("growth_log.csv"), gg);
  run.output(run.out_path("model.edges"));
  run.output(run.out_path("model.nodes"));
  run.output(run.out_path("growth_log.csv"));

  if (!checkpoints.empty()) {
    run.config("checkpoints", std::to_string(checkpoints.size()));
    DiameterGrowth dg = diameter_growth(config, checkpoints);
    write_diameter_series(run.out_path("diameter_growth.csv"), dg);
    run.output(run.out_path("diameter_growth.csv"));
  }
  run.finish();

  std::cout << "model " << rule << ": " << gg.graph.node_count() << " nodes, "
            << gg.graph.edge_count() << " edges, "
            << gg.rejected_candidates << " rejected candidates";
  if (gg.rejection_limit_hit) {
    std::cout << " (stopped early: rejection limit)";
  }
  std::cout << "\n";
  return 0;
}

int cmd_communities(const GlobalOpts& g, const std::string& edges_path,
                    const std::string& trace_path, int l_b, int top_k,
                    int restarts, std::optional<std::int64_t> window) {
  require_seed(g, "communities");
  Run run(g, "communities");
  run.config("edges", edges_path);
  run.config("trace", trace_path);
  run.config("lb", std::to_string(l_b));
  run.config("topk", std::to_string(top_k));
  run.config("restarts", std::to_string(restarts));
  if (window) run.config("window", std::to_string(*window));
  run.input(edges_path);
  run.input(trace_path);

  Graph graph = load_graph(edges_path);
  EventTrace trace = parse_trace_file(trace_path);
  BoxCover c = cover(graph, l_b, g.seed, restarts);
  CommunityPartition partition = communities_from_cover(graph, c);
  if (partition.degenerate_singletons) {
    std::cerr << "warning: l_B=1 yields singleton communities\n";
  }
  CommunityWebCounts counts = community_web_counts(trace, partition, window);
  TfIdfTable table = tf_idf(counts);

  write_partition(run.out_path("communities.csv"), partition);
  write_tfidf(run.out_path("tfidf.csv"), table);
  write_top_websites_json(run.out_path("top_websites.json"), table, top_k);
  run.output(run.out_path("communities.csv"));
  run.output(run.out_path("tfidf.csv"));
  run.output(run.out_path("top_websites.json"));
  run.finish();

  std::cout << partition.communities.size() << " communities at l_B=" << l_b
            << "; attributed " << counts.attributed << " web visits, "
            << counts.unattributed << " unattributed\n";
  return 0;
}

int cmd_hubcorr(const GlobalOpts& g, const std::string& edges_path, double b) {
  Run run(g, "hubcorr");
  run.config("edges", edges_path);
  run.config("b", format_double(b));
  run.input(edges_path);

  Graph graph = load_graph(edges_path);
  std::vector<std::int64_t> degrees;
  degrees.reserve(graph.node_count());
  for (int u = 0; u < graph.node_count(); ++u) {
    if (graph.degree(u) > 0) degrees.push_back(graph.degree(u));
  }
  DegreeExponent gamma_fit = fit_degree_exponent(degrees);
  HubCorrelation hc = hub_attraction(graph, b, gamma_fit.gamma);

  nlohmann::json j{{"schema", "netscale.hubcorr/1"},
                   {"b", hc.b},
                   {"gamma", gamma_fit.gamma},
                   {"gamma_xmin", gamma_fit.xmin},
                   {"gamma_ks", gamma_fit.ks_statistic},
                   {"slope", hc.slope},
                   {"epsilon", hc.epsilon},
                   {"region", to_string(hc.region)},
                   {"points_used", hc.points_used},
                   {"undefined_k", hc.undefined_k}};
  std::ofstream out(run.out_path("hubcorr.json"));
  out << j.dump(2) << '\n';
  out.close();
  write_eb_curve(run.out_path("eb_curve.csv"), hc);
  run.output(run.out_path("hubcorr.json"));
  run.output(run.out_path("eb_curve.csv"));
  run.finish();

  std::cout << "gamma=" << gamma_fit.gamma << ", slope=" << hc.slope
            << ", epsilon=" << hc.epsilon << ", region "
            << to_string(hc.region) << "\n";
  return 0;
}

int cmd_stats(const GlobalOpts& g, const std::string& trace_path) {
  Run run(g, "stats");
  run.config("trace", trace_path);
  run.input(trace_path);

  EventTrace trace = parse_trace_file(trace_path);
  if (trace.records.empty()) {
    throw FormatError("'" + trace_path + "': trace is empty");
  }
  auto stats = user_statistics(trace);
  write_user_stats(run.out_path("user_stats.csv"), stats);
  run.output(run.out_path("user_stats.csv"));

  auto cells = cross_correlations(stats_columns(stats), all_variable_pairs());
  write_correlations_json(run.out_path("correlations.json"), cells);
  run.output(run.out_path("correlations.json"));

  std::string tail_note;
  try {
    auto fits = fit_user_tails(stats);
    write_tail_fits_json(run.out_path("tail_fits.json"), fits);
    run.output(run.out_path("tail_fits.json"));
  } catch (const DomainError& e) {
    tail_note = e.what();
  }
  run.finish();

  std::cout << stats.size() << " users, " << cells.size()
            << " correlation pairs";
  if (!tail_note.empty()) std::cout << "; tail fits skipped: " << tail_note;
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"network renormalization and spatial-growth toolkit"};
  app.require_subcommand(1);

  GlobalOpts global;
  app.add_option("--seed", global.seed, "seed for randomized procedures")
      ->each([&](const std::string&) { global.seed_given = true; });
  app.add_option("--threads", global.threads, "worker thread cap");
  app.add_flag("--strict", global.strict,
               "require explicit --seed for randomized commands");
  app.add_option("--output-dir", global.output_dir,
                 "directory for data files and manifest");

  auto* ingest = app.add_subcommand("ingest", "build networks from a trace");
  std::string trace_path;
  std::int64_t session_gap = -1;
  ingest->add_option("trace", trace_path, "trace CSV")->required();
  ingest->add_option("--session-gap", session_gap,
                     "seconds; transitions across longer pauses are dropped");

  auto* boxcount = app.add_subcommand("boxcount", "N(l_B) box-count series");
  std::string edges_path;
  int lb_max = 10, restarts = 20;
  boxcount->add_option("edges", edges_path, "edge-list file")->required();
  boxcount->add_option("--lb-max", lb_max, "largest box length");
  boxcount->add_option("--restarts", restarts, "randomized cover restarts");

  auto* classify = app.add_subcommand("classify", "fractal vs small-world");
  std::string counts_path;
  classify->add_option("box_counts", counts_path, "box-count CSV")->required();

  auto* renorm = app.add_subcommand("renorm", "collapse boxes into supernodes");
  std::string renorm_edges, mode = "flow";
  int renorm_lb = 2, lb_min = 2, sweep_lb_max = 6, renorm_restarts = 20;
  bool dump_stages = false;
  renorm->add_option("edges", renorm_edges, "edge-list file")->required();
  renorm->add_option("--mode", mode, "once|flow|sweep");
  renorm->add_option("--lb", renorm_lb, "box length (once/flow)");
  renorm->add_option("--lb-min", lb_min, "sweep lower bound");
  renorm->add_option("--lb-max", sweep_lb_max, "sweep upper bound");
  renorm->add_option("--restarts", renorm_restarts, "cover restarts");
  renorm->add_flag("--dump-stages", dump_stages, "write per-stage edge lists");

  auto* generate = app.add_subcommand("generate", "spatial-attachment growth");
  std::string rule = "all";
  int gen_n = 3000;
  double radius = 15.0, arena = 1000.0;
  std::vector<int> checkpoints;
  long long max_rejections = 5'000'000;
  generate->add_option("--rule", rule, "all|max|min");
  generate->add_option("--n", gen_n, "target node count");
  generate->add_option("--radius", radius, "attachment radius");
  generate->add_option("--arena", arena, "arena side length");
  generate->add_option("--checkpoints", checkpoints,
                       "node counts at which to record the diameter")
      ->delimiter(',');
  generate->add_option("--max-rejections", max_rejections,
                       "consecutive rejected candidates before giving up");

  auto* communities = app.add_subcommand(
      "communities", "box communities and TF-IDF website ranking");
  std::string comm_edges, comm_trace;
  int comm_lb = 4, top_k = 10, comm_restarts = 20;
  std::int64_t window = -1;
  communities->add_option("edges", comm_edges, "mobility edge list")->required();
  communities->add_option("trace", comm_trace, "trace CSV")->required();
  communities->add_option("--lb", comm_lb, "community box length");
  communities->add_option("--topk", top_k, "websites per community");
  communities->add_option("--restarts", comm_restarts, "cover restarts");
  communities->add_option("--window", window,
                          "look-back seconds for attributing web visits");

  auto* hubcorr = app.add_subcommand("hubcorr", "E_b(k) hub correlation");
  std::string hub_edges;
  double b = 3.0;
  hubcorr->add_option("edges", hub_edges, "edge-list file")->required();
  hubcorr->add_option("--b", b, "threshold multiplier");

  auto* stats = app.add_subcommand("stats", "per-user statistics and correlations");
  std::string stats_trace;
  stats->add_option("trace", stats_trace, "trace CSV")->required();

  CLI11_PARSE(app, argc, argv);

  if (global.threads > 0) set_worker_cap(global.threads);

  try {
    if (app.got_subcommand(ingest)) {
      return cmd_ingest(global, trace_path,
                        session_gap >= 0
                            ? std::optional<std::int64_t>(session_gap)
                            : std::nullopt);
    }
    if (app.got_subcommand(boxcount)) {
      return cmd_boxcount(global, edges_path, lb_max, restarts);
    }
    if (app.got_subcommand(classify)) {
      return cmd_classify(global, counts_path);
    }
    if (app.got_subcommand(renorm)) {
      return cmd_renorm(global, renorm_edges, mode, renorm_lb, lb_min,
                        sweep_lb_max, renorm_restarts, dump_stages);
    }
    if (app.got_subcommand(generate)) {
      return cmd_generate(global, rule, gen_n, radius, arena, checkpoints,
                          max_rejections);
    }
    if (app.got_subcommand(communities)) {
      return cmd_communities(global, comm_edges, comm_trace, comm_lb, top_k,
                             comm_restarts,
                             window >= 0 ? std::optional<std::int64_t>(window)
                                         : std::nullopt);
    }
    if (app.got_subcommand(hubcorr)) {
      return cmd_hubcorr(global, hub_edges, b);
    }
    if (app.got_subcommand(stats)) {
      return cmd_stats(global, stats_trace);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

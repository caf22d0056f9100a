#include "netscale/scaling_fit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "json.hpp"
#include "netscale/error.hpp"
#include "netscale/graph_io.hpp"
#include "netscale/stats.hpp"

namespace netscale {

namespace {

// Shared fit window: l_B >= 2 up to the last point with N above
// max(3, components); the saturated endpoint (N -> components) would bias
// both functional forms.
std::vector<std::pair<double, double>> fit_window(const BoxCountSeries& series) {
  auto entries = series.entries;
  std::sort(entries.begin(), entries.end());
  const double floor_n = std::max(3.0, static_cast<double>(series.components));
  int lb_cut = -1;
  for (const auto& [l_b, n] : entries) {
    if (l_b >= 2 && n > floor_n) lb_cut = std::max(lb_cut, l_b);
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& [l_b, n] : entries) {
    if (l_b >= 2 && l_b <= lb_cut && n > 1.0) {
      pts.emplace_back(static_cast<double>(l_b), n);
    }
  }
  if (pts.size() < 3) {
    throw DomainError(
        "curve fit: need >= 3 usable points with l_B >= 2 and N above the "
        "saturation floor, got " +
        std::to_string(pts.size()));
  }
  return pts;
}

FitResult fit_loglinear(const BoxCountSeries& series, bool log_x) {
  auto pts = fit_window(series);
  std::vector<double> xs, ys;
  xs.reserve(pts.size());
  ys.reserve(pts.size());
  for (const auto& [l_b, n] : pts) {
    xs.push_back(log_x ? std::log(l_b) : l_b);
    ys.push_back(std::log(n));
  }
  OlsFit ols = ols_fit(xs, ys);
  FitResult fit;
  fit.kind = log_x ? CurveKind::PowerLaw : CurveKind::Exponential;
  fit.exponent = -ols.slope;
  fit.intercept = ols.intercept;
  fit.r_squared = ols.r_squared;
  fit.points_used = ols.n;
  fit.aic = aic_from_rss(ols.rss, ols.n, 2);
  return fit;
}

}  // namespace

FitResult fit_power_law_curve(const BoxCountSeries& series) {
  return fit_loglinear(series, true);
}

FitResult fit_exponential_curve(const BoxCountSeries& series) {
  return fit_loglinear(series, false);
}

ScalingClass classify_topology(const BoxCountSeries& series) {
  ScalingClass sc;
  sc.power_fit = fit_power_law_curve(series);
  sc.exp_fit = fit_exponential_curve(series);
  sc.margin = std::abs(sc.power_fit.r_squared - sc.exp_fit.r_squared);
  sc.verdict = sc.power_fit.r_squared >= sc.exp_fit.r_squared
                   ? TopologyClass::Fractal
                   : TopologyClass::SmallWorld;
  sc.ambiguous = sc.margin < 0.01;
  return sc;
}

double hurwitz_zeta(double s, double a) {
  if (s <= 1.0) throw DomainError("hurwitz_zeta: requires s > 1");
  if (a < 0.5) throw DomainError("hurwitz_zeta: requires a >= 0.5");
  double sum = 0.0;
  double x = a;
  while (x < 24.0) {
    sum += std::pow(x, -s);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double xs = std::pow(x, -s);
  sum += xs * x / (s - 1.0);  // integral tail x^(1-s)/(s-1)
  sum += 0.5 * xs;
  sum += s * xs * inv / 12.0;
  sum -= s * (s + 1.0) * (s + 2.0) * xs * inv * inv * inv / 720.0;
  sum += s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * xs * inv * inv *
         inv * inv * inv / 30240.0;
  return sum;
}

DegreeExponent fit_degree_exponent(std::span<const std::int64_t> values) {
  if (values.size() < 50) {
    throw DomainError("fit_degree_exponent: need >= 50 values, got " +
                      std::to_string(values.size()));
  }
  std::vector<std::int64_t> sorted(values.begin(), values.end());
  for (auto v : sorted) {
    if (v < 1) {
      throw DomainError("fit_degree_exponent: values must be positive integers");
    }
  }
  std::sort(sorted.begin(), sorted.end());

  // distinct values with multiplicities
  std::vector<std::pair<std::int64_t, int>> hist;
  for (auto v : sorted) {
    if (!hist.empty() && hist.back().first == v) {
      ++hist.back().second;
    } else {
      hist.emplace_back(v, 1);
    }
  }
  if (hist.size() < 10) {
    throw DomainError("fit_degree_exponent: need >= 10 distinct values, got " +
                      std::to_string(hist.size()));
  }

  constexpr int kMinTail = 25;
  constexpr int kMinDistinctTail = 10;
  const int n_total = static_cast<int>(sorted.size());

  // exact discrete MLE: minimize n*ln zeta(g, xmin) + g*sum(ln x) over g.
  // The log-likelihood is concave in g, so golden-section search suffices.
  auto mle_gamma = [](double xmin, double n_tail, double sum_log_x) {
    auto neg_ll = [&](double g) {
      return n_tail * std::log(hurwitz_zeta(g, xmin)) + g * sum_log_x;
    };
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 1.0 + 1e-9, b = 20.0;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = neg_ll(c), fd = neg_ll(d);
    while (b - a > 1e-7) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - phi * (b - a);
        fc = neg_ll(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + phi * (b - a);
        fd = neg_ll(d);
      }
    }
    return 0.5 * (a + b);
  };

  bool found = false;
  DegreeExponent best;
  int tail_count = n_total;
  int distinct_from_here = static_cast<int>(hist.size());
  for (std::size_t ci = 0; ci < hist.size(); ++ci) {
    const std::int64_t xmin = hist[ci].first;
    const int n_tail = tail_count;
    const int distinct_tail = distinct_from_here;
    tail_count -= hist[ci].second;
    --distinct_from_here;
    if (n_tail < kMinTail || distinct_tail < kMinDistinctTail) continue;

    double sum_log_x = 0.0;
    for (std::size_t j = ci; j < hist.size(); ++j) {
      sum_log_x +=
          hist[j].second * std::log(static_cast<double>(hist[j].first));
    }
    const double gamma =
        mle_gamma(static_cast<double>(xmin), n_tail, sum_log_x);
    if (!(gamma > 1.0) || gamma > 19.5) continue;

    // KS distance between the empirical tail CDF and the fitted law
    const double z_xmin = hurwitz_zeta(gamma, static_cast<double>(xmin));
    double ks = 0.0;
    int emp_cum = 0;
    for (std::size_t j = ci; j < hist.size(); ++j) {
      emp_cum += hist[j].second;
      const double f_emp = static_cast<double>(emp_cum) / n_tail;
      const double f_fit =
          1.0 - hurwitz_zeta(gamma, static_cast<double>(hist[j].first) + 1.0) /
                    z_xmin;
      ks = std::max(ks, std::abs(f_emp - f_fit));
    }

    if (!found || ks < best.ks_statistic) {
      found = true;
      best.gamma = gamma;
      best.xmin = xmin;
      best.ks_statistic = ks;
      best.n_tail = n_tail;
    }
  }
  if (!found) {
    throw DomainError(
        "fit_degree_exponent: sample too degenerate for a stable tail fit");
  }
  return best;
}

std::string to_string(PhaseRegion r) {
  switch (r) {
    case PhaseRegion::I:
      return "I";
    case PhaseRegion::II:
      return "II";
    default:
      return "III";
  }
}

PhaseRegion phase_region(double gamma, double epsilon) {
  if (!(gamma > 1.0)) throw DomainError("phase_region: gamma must be > 1");
  if (epsilon < gamma - 1.0) return PhaseRegion::I;
  if (epsilon <= 2.0) return PhaseRegion::II;
  return PhaseRegion::III;
}

double epsilon_from_slope(double gamma, double slope) { return gamma - slope; }

HubCorrelation hub_attraction(const Graph& g, double b, double gamma) {
  if (!(b > 1.0)) throw DomainError("hub_attraction: b must be > 1");
  if (g.edge_count() < 100) {
    throw DomainError("hub_attraction: need >= 100 edges, got " +
                      std::to_string(g.edge_count()));
  }

  int max_deg = 0;
  for (int u = 0; u < g.node_count(); ++u) max_deg = std::max(max_deg, g.degree(u));

  // endpoint-weighted degree distribution: node of degree k appears k times
  std::vector<double> endpoint_count(max_deg + 2, 0.0);
  std::vector<long long> nodes_of_degree(max_deg + 1, 0);
  for (int u = 0; u < g.node_count(); ++u) {
    const int k = g.degree(u);
    if (k == 0) continue;
    endpoint_count[k] += k;
    ++nodes_of_degree[k];
  }
  std::vector<double> endpoint_tail(max_deg + 2, 0.0);
  for (int k = max_deg; k >= 1; --k) {
    endpoint_tail[k] = endpoint_tail[k + 1] + endpoint_count[k];
  }
  const double total_endpoints = endpoint_tail[1];

  // neighbor-degree tail counts per node degree
  std::vector<long long> num_hits(max_deg + 1, 0);
  std::vector<long long> num_total(max_deg + 1, 0);
  auto threshold = [&](int k) {
    return static_cast<long long>(std::ceil(b * k - 1e-9));
  };
  for (int u = 0; u < g.node_count(); ++u) {
    const int k = g.degree(u);
    if (k == 0) continue;
    const long long thr = threshold(k);
    for (int v : g.neighbors(u)) {
      num_total[k] += 1;
      if (g.degree(v) >= thr) num_hits[k] += 1;
    }
  }

  HubCorrelation hc;
  hc.b = b;
  std::vector<double> log_k, log_eb;
  for (int k = 1; k <= max_deg; ++k) {
    if (nodes_of_degree[k] == 0) continue;
    const long long thr = threshold(k);
    if (thr > max_deg) {
      hc.undefined_k.push_back(k);
      continue;
    }
    const double denom = endpoint_tail[thr] / total_endpoints;
    if (denom <= 0.0) {
      hc.undefined_k.push_back(k);
      continue;
    }
    const double num = static_cast<double>(num_hits[k]) / num_total[k];
    const double eb = num / denom;
    hc.curve.emplace_back(k, eb);
    if (num > 0.0) {
      log_k.push_back(std::log(static_cast<double>(k)));
      log_eb.push_back(std::log(eb));
    }
  }
  if (log_k.size() < 3) {
    std::string msg = "hub_attraction: fewer than 3 usable k points";
    if (!hc.undefined_k.empty()) {
      msg += " (E_b undefined from k=" + std::to_string(hc.undefined_k.front()) +
             ": b*k exceeds the maximum degree " + std::to_string(max_deg) + ")";
    }
    throw DomainError(msg);
  }
  OlsFit ols = ols_fit(log_k, log_eb);
  hc.slope = ols.slope;
  hc.points_used = ols.n;
  hc.epsilon = epsilon_from_slope(gamma, hc.slope);
  hc.region = phase_region(gamma, hc.epsilon);
  return hc;
}

namespace {

nlohmann::json fit_to_json(const FitResult& fit) {
  return nlohmann::json{
      {"kind", fit.kind == CurveKind::PowerLaw ? "power_law" : "exponential"},
      {"exponent", fit.exponent},
      {"intercept", fit.intercept},
      {"r_squared", fit.r_squared},
      {"points_used", fit.points_used},
      {"aic", fit.aic}};
}

}  // namespace

void write_fit_json(const std::filesystem::path& path, const ScalingClass& sc) {
  nlohmann::json j{
      {"schema", "netscale.classify/1"},
      {"verdict",
       sc.verdict == TopologyClass::Fractal ? "FRACTAL" : "SMALL_WORLD"},
      {"ambiguous", sc.ambiguous},
      {"margin", sc.margin},
      {"power_fit", fit_to_json(sc.power_fit)},
      {"exponential_fit", fit_to_json(sc.exp_fit)}};
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

void write_hub_correlation_json(const std::filesystem::path& path,
                                const HubCorrelation& hc, double gamma) {
  nlohmann::json j{{"schema", "netscale.hubcorr/1"},
                   {"b", hc.b},
                   {"gamma", gamma},
                   {"slope", hc.slope},
                   {"epsilon", hc.epsilon},
                   {"region", to_string(hc.region)},
                   {"points_used", hc.points_used},
                   {"undefined_k", hc.undefined_k}};
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

void write_eb_curve(const std::filesystem::path& path,
                    const HubCorrelation& hc) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "k,E_b\n";
  for (const auto& [k, eb] : hc.curve) {
    out << k << ',' << format_double(eb) << '\n';
  }
}

}  // namespace netscale

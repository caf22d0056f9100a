#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "netscale/box_cover.hpp"
#include "netscale/graph.hpp"

namespace netscale {

enum class CurveKind { PowerLaw, Exponential };

struct FitResult {
  CurveKind kind = CurveKind::PowerLaw;
  double exponent = 0.0;   // d_B for power law, 1/l_0 for exponential
  double intercept = 0.0;  // log-scale constant
  double r_squared = 0.0;
  int points_used = 0;
  double aic = 0.0;
};

// Least squares on (log l_B, log N): N(l_B) ~ l_B^(-exponent).
FitResult fit_power_law_curve(const BoxCountSeries& series);

// Least squares on (l_B, log N): N(l_B) ~ exp(-exponent * l_B).
FitResult fit_exponential_curve(const BoxCountSeries& series);

enum class TopologyClass { Fractal, SmallWorld };

struct ScalingClass {
  TopologyClass verdict = TopologyClass::Fractal;
  bool ambiguous = false;  // r-squared margin below 0.01
  FitResult power_fit;
  FitResult exp_fit;
  double margin = 0.0;
};

ScalingClass classify_topology(const BoxCountSeries& series);

struct DegreeExponent {
  double gamma = 0.0;
  std::int64_t xmin = 1;
  double ks_statistic = 0.0;
  int n_tail = 0;
};

// Discrete maximum-likelihood power-law fit; xmin minimizes the
// Kolmogorov-Smirnov distance between the empirical tail and the fitted law.
DegreeExponent fit_degree_exponent(std::span<const std::int64_t> values);

enum class PhaseRegion { I, II, III };

std::string to_string(PhaseRegion r);

// Region I: epsilon < gamma-1 (random-like). Region II: gamma-1 <= epsilon
// <= 2 (weak hub repulsion, non-fractal). Region III: epsilon > 2 (fractal).
PhaseRegion phase_region(double gamma, double epsilon);

// E_b(k) ~ k^-(epsilon-gamma), so epsilon follows from the measured slope.
double epsilon_from_slope(double gamma, double slope);

struct HubCorrelation {
  double b = 3.0;
  std::vector<std::pair<int, double>> curve;  // (k, E_b(k)) where defined
  double slope = 0.0;                         // log-log fit over E_b > 0
  double epsilon = 0.0;
  PhaseRegion region = PhaseRegion::I;
  int points_used = 0;
  std::vector<int> undefined_k;  // b*k beyond the maximum degree
};

// Ratio of the neighbor-degree tail mass of degree-k nodes to the
// unconditional endpoint tail mass at threshold b*k.
HubCorrelation hub_attraction(const Graph& g, double b, double gamma);

void write_fit_json(const std::filesystem::path& path, const ScalingClass& sc);
void write_hub_correlation_json(const std::filesystem::path& path,
                                const HubCorrelation& hc, double gamma);
void write_eb_curve(const std::filesystem::path& path,
                    const HubCorrelation& hc);

// Hurwitz zeta for s > 1, a >= 0.5; the discrete power-law normalizer.
double hurwitz_zeta(double s, double a);

}  // namespace netscale

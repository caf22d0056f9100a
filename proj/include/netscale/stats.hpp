#pragma once

#include <optional>
#include <span>
#include <vector>

namespace netscale {

// Pearson correlation of paired samples. Returns nullopt when either side has
// (numerically) zero variance, i.e. the coefficient is undefined.
std::optional<double> pearson(std::span<const double> xs,
                              std::span<const double> ys);

struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double rss = 0.0;
  int n = 0;
};

// Ordinary least squares y = slope*x + intercept. Needs >= 2 points with
// non-degenerate x.
OlsFit ols_fit(std::span<const double> xs, std::span<const double> ys);

// Akaike information criterion for a least-squares fit with k parameters.
double aic_from_rss(double rss, int n, int k);

}  // namespace netscale

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace remis {

double median(std::vector<double> values);

/// Percentile bootstrap (2.5 / 97.5) confidence interval for the median.
std::pair<double, double> bootstrap_median_ci(const std::vector<double>& values,
                                              int resamples = 2000,
                                              std::uint64_t seed = 0x5eedULL);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Spearman rank correlation with average ranks on ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace remis

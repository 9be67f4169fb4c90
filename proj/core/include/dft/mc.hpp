#pragma once

/// @file mc.hpp
/// Monte-Carlo oracle: sample failure times, evaluate the structure
/// function, count failures by t.
///
/// Sample i draws from RandomStream(seed, i) only, and tallies are integer
/// counts, so estimates are bit-identical for any worker count.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "dft/model.hpp"

namespace dft {

struct McConfig {
  std::size_t samples = 1000000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double confidence = 0.99;
};

struct McEstimate {
  double p_hat = 0.0;
  /// z * sqrt(p_hat (1 - p_hat) / n), z the two-sided normal quantile.
  double half_width = 0.0;
  std::size_t samples_used = 0;
};

/// Normal-approximation interval half-width.
double half_width(double p_hat, std::size_t n, double confidence);

/// Estimate of Pr(top <= t). Throws MissingDistribution,
/// MissingConditionalLaw.
McEstimate simulate(const DftModel& m, double t, const McConfig& cfg = {});

/// One shared population compared against every grid time, so estimates
/// are non-decreasing along an ascending grid.
std::vector<std::pair<double, McEstimate>> simulate_curve(
    const DftModel& m, const std::vector<double>& times,
    const McConfig& cfg = {});

/// Draws of the top event's failure time (+inf when it never fails), for
/// samples [first, first + count).
std::vector<double> sample_top_times(const DftModel& m, std::uint64_t seed,
                                     std::size_t first, std::size_t count);

}  // namespace dft

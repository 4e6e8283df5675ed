#pragma once

#include <span>

namespace quantq {

struct SampleSummary {
  double mean = 0.0;
  double standard_error = 0.0;  // sample std / sqrt(n); 0 for n < 2
};

SampleSummary summarize(std::span<const double> xs);

struct RankCorrelation {
  double rho = 0.0;
  /// Two-sided p-value from the t approximation with n - 2 degrees of freedom.
  double p_value = 1.0;
};

/// Spearman rank correlation; ties receive average ranks.
RankCorrelation spearman(std::span<const double> x, std::span<const double> y);

}  // namespace quantq

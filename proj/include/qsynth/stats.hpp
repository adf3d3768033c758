#pragma once

#include <cstdint>
#include <vector>

#include "qsynth/funcprep.hpp"
#include "qsynth/histogram.hpp"

namespace qsynth {

/// `value` is +inf and `support_mismatch` set when P has mass where Q has none.
struct Divergence {
  double value = 0.0;
  bool support_mismatch = false;
};

/// Natural-log KL(P || Q).
Divergence kl_divergence(const std::vector<double>& p, const std::vector<double>& q);
double js_divergence(const std::vector<double>& p, const std::vector<double>& q);

struct GTest {
  double g = 0.0;  // 2 * sum O ln(O/E)
  double p = 1.0;  // chi-square upper tail, df = bins - 1
  std::uint64_t shots = 0;
  int dof = 0;
  bool expected_zero_observed_positive = false;

  /// G divided by the shot count, i.e. 2 * KL(empirical || expected).
  double per_shot() const { return shots ? g / static_cast<double>(shots) : 0.0; }
};

GTest g_statistic(const std::vector<std::uint64_t>& observed, const std::vector<double>& expected);
GTest g_statistic(const CountHistogram& observed, const Pmf& expected);

/// Upper-tail probability of the chi-square distribution.
double chi2_sf(double x, double dof);

/// Similarity metric used when calibrating shot counts: chi-square upper tail
/// (df = 1) of the per-shot statistic.
double similarity(double g_per_shot);

std::vector<double> empirical(const std::vector<std::uint64_t>& counts);

}  // namespace qsynth

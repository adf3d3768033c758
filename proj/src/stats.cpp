#include "qsynth/stats.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>

#include "qsynth/error.hpp"

namespace qsynth {
namespace {

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorCode::InvalidArgument, "distributions differ in length");
}

}  // namespace

Divergence kl_divergence(const std::vector<double>& p, const std::vector<double>& q) {
  require_same_size(p.size(), q.size());
  Divergence d;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) {
      d.support_mismatch = true;
      d.value = std::numeric_limits<double>::infinity();
      return d;
    }
    d.value += p[i] * std::log(p[i] / q[i]);
  }
  // Rounding can leave a tiny negative sum for P == Q.
  if (d.value < 0.0) d.value = 0.0;
  return d;
}

double js_divergence(const std::vector<double>& p, const std::vector<double>& q) {
  require_same_size(p.size(), q.size());
  std::vector<double> m(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) m[i] = 0.5 * (p[i] + q[i]);
  return 0.5 * kl_divergence(p, m).value + 0.5 * kl_divergence(q, m).value;
}

double chi2_sf(double x, double dof) {
  if (dof <= 0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

double similarity(double g_per_shot) { return chi2_sf(g_per_shot, 1.0); }

std::vector<double> empirical(const std::vector<std::uint64_t>& counts) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  std::vector<double> out(counts.size(), 0.0);
  if (total == 0.0) return out;
  for (std::size_t i = 0; i < counts.size(); ++i) out[i] = static_cast<double>(counts[i]) / total;
  return out;
}

GTest g_statistic(const std::vector<std::uint64_t>& observed, const std::vector<double>& expected) {
  require_same_size(observed.size(), expected.size());
  GTest t;
  for (auto o : observed) t.shots += o;
  if (t.shots == 0) throw Error(ErrorCode::InvalidArgument, "histogram has no shots");
  t.dof = static_cast<int>(observed.size()) - 1;
  const double n = static_cast<double>(t.shots);
  double sum = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (observed[i] == 0) continue;
    const double e = n * expected[i];
    if (e <= 0.0) {
      t.expected_zero_observed_positive = true;
      t.g = std::numeric_limits<double>::infinity();
      t.p = 0.0;
      return t;
    }
    const double o = static_cast<double>(observed[i]);
    sum += o * std::log(o / e);
  }
  t.g = std::max(0.0, 2.0 * sum);
  t.p = chi2_sf(t.g, t.dof);
  return t;
}

GTest g_statistic(const CountHistogram& observed, const Pmf& expected) {
  return g_statistic(observed.dense(), expected.p);
}

}  // namespace qsynth

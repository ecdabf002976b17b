#include "gpptutor/analytics/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gpptutor::analytics {

double NlgRaw(double pretest_mean, double posttest_mean) {
  if (pretest_mean < 0.0 || pretest_mean > 100.0 || posttest_mean < 0.0 || posttest_mean > 100.0) {
    throw std::invalid_argument("scores must be in [0, 100]");
  }
  if (pretest_mean == 100.0) return posttest_mean == 100.0 ? 0.0 : -1.0;
  return (posttest_mean - pretest_mean) / std::sqrt(100.0 - pretest_mean);
}

double Nlg(double pretest_mean, double posttest_mean) {
  return std::clamp(NlgRaw(pretest_mean, posttest_mean), -1.0, 1.0);
}

MannWhitneyResult MannWhitneyU(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("Mann-Whitney U needs two nonempty samples");
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const std::size_t n = na + nb;

  std::vector<std::pair<double, bool>> pooled;  // (value, from a)
  pooled.reserve(n);
  for (double x : a) pooled.emplace_back(x, true);
  for (double x : b) pooled.emplace_back(x, false);
  std::sort(pooled.begin(), pooled.end(), [](const auto& l, const auto& r) { return l.first < r.first; });

  double rank_sum_a = 0.0;
  double tie_term = 0.0;  // sum of t^3 - t over tie groups
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && pooled[j].first == pooled[i].first) ++j;
    const double t = static_cast<double>(j - i);
    const double average_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (pooled[k].second) rank_sum_a += average_rank;
    }
    tie_term += t * t * t - t;
    i = j;
  }

  const double fa = static_cast<double>(na);
  const double fb = static_cast<double>(nb);
  const double fn = static_cast<double>(n);
  MannWhitneyResult r;
  r.u_a = rank_sum_a - fa * (fa + 1.0) / 2.0;
  r.u_b = fa * fb - r.u_a;
  r.u = std::min(r.u_a, r.u_b);

  const double mu = fa * fb / 2.0;
  const double variance = fa * fb / 12.0 * ((fn + 1.0) - tie_term / (fn * (fn - 1.0)));
  if (!(variance > 0.0)) {
    r.z = 0.0;
    r.p = 1.0;
    return r;
  }
  r.z = (std::max(r.u_a, r.u_b) - mu - 0.5) / std::sqrt(variance);
  r.p = std::min(1.0, std::erfc(r.z / std::sqrt(2.0)));
  return r;
}

double Mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean of an empty sample");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double StdDev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = Mean(values);
  double ss = 0.0;
  for (double x : values) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double Percentile(std::span<const double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("percentile must be in [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
}

double Median(std::span<const double> values) { return Percentile(values, 0.5); }

std::vector<Proficiency> MedianSplit(std::span<const double> scores) {
  if (scores.size() < 2) throw std::invalid_argument("median split needs at least two students");
  const double median = Median(scores);
  std::vector<Proficiency> out;
  out.reserve(scores.size());
  for (double s : scores) out.push_back(s > median ? Proficiency::kHigh : Proficiency::kLow);
  return out;
}

bool BonferroniSignificant(double p, int m, double alpha) {
  if (m < 1) throw std::invalid_argument("Bonferroni correction needs m >= 1");
  return p < alpha / static_cast<double>(m);
}

std::vector<bool> Bonferroni(std::span<const double> p_values, double alpha) {
  std::vector<bool> out;
  out.reserve(p_values.size());
  for (double p : p_values) out.push_back(BonferroniSignificant(p, static_cast<int>(p_values.size()), alpha));
  return out;
}

}  // namespace gpptutor::analytics

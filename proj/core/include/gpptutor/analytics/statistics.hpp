#pragma once

#include <span>
#include <vector>

namespace gpptutor::analytics {

/// (post - pre) / sqrt(100 - pre), clamped to [-1, 1]. With pre = 100 the
/// gain is 0 when post is also 100 and -1 otherwise.
double Nlg(double pretest_mean, double posttest_mean);

/// Unclamped gain, for reporting.
double NlgRaw(double pretest_mean, double posttest_mean);

struct MannWhitneyResult {
  double u_a = 0.0;  // pairs with a > b, ties counted one half
  double u_b = 0.0;  // pairs with b > a, ties counted one half
  double u = 0.0;    // min(u_a, u_b)
  double z = 0.0;    // continuity-corrected, tie-corrected normal deviate (>= 0 when p < 1)
  double p = 1.0;    // two-sided
};

/// Rank-sum Mann-Whitney U with average ranks for ties and a two-sided p
/// value from the normal approximation with tie and continuity correction.
/// Throws std::invalid_argument on an empty sample.
MannWhitneyResult MannWhitneyU(std::span<const double> a, std::span<const double> b);

enum class Proficiency { kLow, kHigh };

double Median(std::span<const double> values);

/// Linear interpolation between closest ranks, q in [0, 1].
double Percentile(std::span<const double> values, double q);

/// Above the median is High; at or below is Low. Needs two or more scores.
std::vector<Proficiency> MedianSplit(std::span<const double> scores);

/// p < alpha / m.
bool BonferroniSignificant(double p, int m, double alpha = 0.05);
std::vector<bool> Bonferroni(std::span<const double> p_values, double alpha = 0.05);

double Mean(std::span<const double> values);
/// Sample standard deviation (n - 1); 0 for fewer than two values.
double StdDev(std::span<const double> values);

}  // namespace gpptutor::analytics

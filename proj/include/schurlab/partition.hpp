#pragma once

#include <span>
#include <vector>

namespace schurlab {

/// Smooth cutoff: 1 on [0, 3/4], 0 on [1, inf), built from exp(-1/x).
double smooth_cutoff(double x);

/// Smoothed maximum of |x_b|: the 64-norm, i.e. log-sum-exp of log|x_b| with sharpness 64.
/// Homogeneous of degree one and at least max|x_b|.
double smooth_max_abs(std::span<const double> x);

/// Partition of unity on R^k \ {0} subordinate to the charts {|x_b| < 2|x_l| for all b}.
class SpherePartition {
 public:
  explicit SpherePartition(int k);

  int k() const { return k_; }
  /// Weight of chart l (0-based) at x; degree-0 homogeneous and even.
  double eval(int l, std::span<const double> x) const;
  std::vector<double> eval_all(std::span<const double> x) const;
  /// Chart membership with margin 1: |x_b| < 2|x_l| for every b.
  bool in_chart(int l, std::span<const double> x) const;

 private:
  int k_;
};

/// Consecutive differences lambda_{i_a} - lambda_{i_{a-1}} over the sorted index set I.
std::vector<double> consecutive_differences(const std::vector<int>& I, std::span<const double> lambda);

/// theta_{I, i}: the chart weight of the difference i - (its lower neighbour in I).
double theta_eval(const std::vector<int>& I, int i, std::span<const double> lambda);

/// Membership of lambda in the chart of i over I (margin 1).
bool chart_membership(const std::vector<int>& I, int i, std::span<const double> lambda);

}  // namespace schurlab

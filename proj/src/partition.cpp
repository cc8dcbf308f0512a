#include "schurlab/partition.hpp"

#include <algorithm>
#include <cmath>

#include "schurlab/divdiff.hpp"
#include "schurlab/errors.hpp"

namespace schurlab {

namespace {

constexpr double kSharpness = 64.0;

double bump_tail(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

int position_in(const std::vector<int>& I, int i) {
  const auto it = std::find(I.begin(), I.end(), i);
  if (it == I.end() || it == I.begin()) {
    throw Error(ErrorCode::IndexOutOfRange, "partition: index must be a non-minimal member of I");
  }
  return static_cast<int>(it - I.begin()) - 1;
}

}  // namespace

double smooth_cutoff(double x) {
  if (x <= 0.75) return 1.0;
  if (x >= 1.0) return 0.0;
  const double a = bump_tail(1.0 - x);
  const double b = bump_tail(x - 0.75);
  return a / (a + b);
}

double smooth_max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v) / m, kSharpness);
  return m * std::pow(s, 1.0 / kSharpness);
}

SpherePartition::SpherePartition(int k) : k_(k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "sphere partition: k must be >= 1");
}

std::vector<double> SpherePartition::eval_all(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != k_) throw Error(ErrorCode::DimensionMismatch, "sphere partition: wrong dimension");
  const double M = smooth_max_abs(x);
  if (M == 0.0) throw Error(ErrorCode::OnDiagonal, "sphere partition: zero vector");
  std::vector<double> w(x.size());
  double total = 0.0;
  for (std::size_t l = 0; l < x.size(); ++l) {
    w[l] = x[l] == 0.0 ? 0.0 : smooth_cutoff(M / (2.0 * std::abs(x[l])));
    total += w[l];
  }
  for (double& v : w) v /= total;
  return w;
}

double SpherePartition::eval(int l, std::span<const double> x) const {
  if (l < 0 || l >= k_) throw Error(ErrorCode::IndexOutOfRange, "sphere partition: chart out of range");
  return eval_all(x)[static_cast<std::size_t>(l)];
}

bool SpherePartition::in_chart(int l, std::span<const double> x) const {
  if (l < 0 || l >= k_) throw Error(ErrorCode::IndexOutOfRange, "sphere partition: chart out of range");
  const double xl = std::abs(x[static_cast<std::size_t>(l)]);
  return std::all_of(x.begin(), x.end(), [xl](double v) { return std::abs(v) < 2.0 * xl; });
}

std::vector<double> consecutive_differences(const std::vector<int>& I, std::span<const double> lambda) {
  std::vector<double> d;
  for (std::size_t a = 1; a < I.size(); ++a) {
    d.push_back(lambda[static_cast<std::size_t>(I[a])] - lambda[static_cast<std::size_t>(I[a - 1])]);
  }
  return d;
}

double theta_eval(const std::vector<int>& I, int i, std::span<const double> lambda) {
  const int l = position_in(I, i);
  const std::vector<double> q = consecutive_differences(I, lambda);
  double m = 0.0;
  for (double v : lambda) m = std::max(m, std::abs(v));
  const double tau = node_tolerance(m);
  if (std::all_of(q.begin(), q.end(), [tau](double v) { return std::abs(v) <= tau; })) {
    throw Error(ErrorCode::OnDiagonal, "theta_eval: lambda is constant on I");
  }
  return SpherePartition(static_cast<int>(q.size())).eval(l, q);
}

bool chart_membership(const std::vector<int>& I, int i, std::span<const double> lambda) {
  const int l = position_in(I, i);
  const std::vector<double> q = consecutive_differences(I, lambda);
  return SpherePartition(static_cast<int>(q.size())).in_chart(l, q);
}

}  // namespace schurlab

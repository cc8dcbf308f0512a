#include "schurlab/divdiff.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "schurlab/errors.hpp"
#include "schurlab/rng.hpp"

namespace schurlab {

double SmoothFunction::eval(double x, int d) const {
  if (d < 0 || d > order_max) {
    throw Error(ErrorCode::OrderTooLow, label + ": derivative order " + std::to_string(d) +
                                            " exceeds " + std::to_string(order_max));
  }
  return derivative(x, d);
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

SmoothFunction make_abs_power(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "make_abs_power: n must be >= 1");
  SmoothFunction f;
  f.order_max = n;
  f.label = "a_" + std::to_string(n);
  f.singular_at_zero = true;
  f.derivative = [n](double s, int d) {
    if (d == n) return s > 0 ? factorial(n) : (s < 0 ? -factorial(n) : 0.0);
    return factorial(n) / factorial(n - d) * std::abs(s) * std::pow(s, n - 1 - d);
  };
  return f;
}

SmoothFunction make_polynomial(std::vector<double> coefficients, std::string label) {
  SmoothFunction f;
  f.order_max = 64;
  f.label = std::move(label);
  f.derivative = [c = std::move(coefficients)](double x, int d) {
    double acc = 0.0;
    for (int k = static_cast<int>(c.size()) - 1; k >= d; --k) {
      acc = acc * x + c[k] * factorial(k) / factorial(k - d);
    }
    return acc;
  };
  return f;
}

SmoothFunction make_monomial(int k) {
  std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
  c.back() = 1.0;
  return make_polynomial(std::move(c), "x^" + std::to_string(k));
}

SmoothFunction make_exp() {
  return {64, [](double x, int) { return std::exp(x); }, "exp", false};
}

SmoothFunction make_sin() {
  return {64, [](double x, int d) {
            switch (d % 4) {
              case 0: return std::sin(x);
              case 1: return std::cos(x);
              case 2: return -std::sin(x);
              default: return -std::cos(x);
            }
          },
          "sin", false};
}

namespace {

/// Newton tableau on z with contiguous blocks of equal labels treated as confluent.
double confluent_tableau(const SmoothFunction& f, const std::vector<double>& z, const std::vector<std::size_t>& block) {
  const std::size_t m = z.size();
  // d[i] holds f[z_{i-k}, ..., z_i] after pass k.
  std::vector<double> d(m);
  for (std::size_t i = 0; i < m; ++i) d[i] = f.eval(z[i], 0);
  for (std::size_t k = 1; k < m; ++k) {
    for (std::size_t i = m - 1; i >= k; --i) {
      if (block[i - k] == block[i]) {
        d[i] = f.eval(z[i], static_cast<int>(k)) / factorial(static_cast<int>(k));
      } else {
        d[i] = (d[i] - d[i - 1]) / (z[i] - z[i - k]);
      }
      if (i == k) break;
    }
  }
  return d[m - 1];
}

}  // namespace

double node_tolerance(double max_abs) { return 1e-12 * (1.0 + max_abs); }

NodeVector::NodeVector(std::vector<double> nodes, std::vector<int> multiplicities)
    : nodes_(std::move(nodes)), multiplicities_(std::move(multiplicities)) {
  if (nodes_.empty() || nodes_.size() != multiplicities_.size()) {
    throw Error(ErrorCode::InvalidArgument, "NodeVector: nodes and multiplicities must be nonempty and of equal length");
  }
  for (int m : multiplicities_) {
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "NodeVector: multiplicities must be >= 1");
    total_ += m;
  }
  for (double x : nodes_) {
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "NodeVector: nonfinite node");
  }
  const double tau = node_tolerance(max_abs());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes_.size(); ++j) {
      if (std::abs(nodes_[i] - nodes_[j]) <= tau) {
        throw Error(ErrorCode::NodeClash, "NodeVector: nodes " + std::to_string(i) + " and " +
                                              std::to_string(j) + " closer than tolerance");
      }
    }
  }
}

NodeVector NodeVector::simple(std::vector<double> nodes) {
  std::vector<int> m(nodes.size(), 1);
  return NodeVector(std::move(nodes), std::move(m));
}

NodeVector NodeVector::from_values(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "NodeVector: no values");
  double max_abs = 0.0;
  for (double v : values) max_abs = std::max(max_abs, std::abs(v));
  const double tau = node_tolerance(max_abs);

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  // leader[i]: position of the first-appearing member of i's cluster.
  std::vector<std::size_t> leader(values.size());
  for (std::size_t a = 0; a < order.size();) {
    std::size_t b = a + 1;
    while (b < order.size() && values[order[b]] - values[order[b - 1]] <= tau) ++b;
    std::size_t first = order[a];
    for (std::size_t c = a; c < b; ++c) first = std::min(first, order[c]);
    for (std::size_t c = a; c < b; ++c) leader[order[c]] = first;
    a = b;
  }
  std::vector<double> nodes;
  std::vector<int> mult;
  std::vector<std::size_t> slot(values.size(), 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (leader[i] == i) {
      slot[i] = nodes.size();
      nodes.push_back(values[i]);
      mult.push_back(0);
    }
    ++mult[slot[leader[i]]];
  }
  return NodeVector(std::move(nodes), std::move(mult));
}

double NodeVector::max_abs() const {
  double m = 0.0;
  for (double x : nodes_) m = std::max(m, std::abs(x));
  return m;
}

std::vector<double> NodeVector::expanded() const {
  std::vector<double> z;
  z.reserve(static_cast<std::size_t>(total_));
  for (std::size_t b = 0; b < nodes_.size(); ++b) z.insert(z.end(), multiplicities_[b], nodes_[b]);
  return z;
}

double divdiff_eval(const SmoothFunction& f, const NodeVector& nodes, DivDiffScale scale) {
  const int order = nodes.order();
  const double factor = scale == DivDiffScale::SimplexAverage ? factorial(order) : 1.0;
  const int needed = *std::max_element(nodes.multiplicities().begin(), nodes.multiplicities().end()) - 1;
  if (needed > f.order_max) {
    throw Error(ErrorCode::OrderTooLow, f.label + ": needs derivative " + std::to_string(needed));
  }
  // The a_n family at a single block at 0: the value is fixed to 0 by convention.
  if (f.singular_at_zero && nodes.size() == 1 && nodes.node(0) == 0.0 && order >= f.order_max) {
    return 0.0;
  }

  std::vector<double> z;
  std::vector<std::size_t> block;
  for (std::size_t b = 0; b < nodes.size(); ++b) {
    z.insert(z.end(), static_cast<std::size_t>(nodes.multiplicity(b)), nodes.node(b));
    block.insert(block.end(), static_cast<std::size_t>(nodes.multiplicity(b)), b);
  }
  return factor * confluent_tableau(f, z, block);
}

OracleEstimate divdiff_simplex_oracle(const SmoothFunction& f, const NodeVector& nodes,
                                      long samples, unsigned long long seed) {
  const int n = nodes.order();
  if (n > f.order_max) {
    throw Error(ErrorCode::OrderTooLow, f.label + ": oracle needs derivative " + std::to_string(n));
  }
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "oracle: samples must be >= 1");
  const std::vector<double> z = nodes.expanded();
  CounterRng rng(seed);
  std::vector<double> w(z.size());
  double mean = 0.0, m2 = 0.0;
  for (long s = 0; s < samples; ++s) {
    double total = 0.0;
    for (double& wi : w) total += (wi = rng.exponential());
    double x = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) x += w[i] * z[i];
    const double v = f.eval(x / total, n);
    const double delta = v - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (v - mean);
  }
  const double nf = factorial(n);
  const double var = samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
  return {mean / nf, std::sqrt(var / static_cast<double>(samples)) / nf};
}

double abs_power_symbol(int n, std::span<const double> values) {
  if (values.size() != static_cast<std::size_t>(n) + 1) {
    throw Error(ErrorCode::DimensionMismatch, "abs_power_symbol: expected n+1 values");
  }
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  // a_n is sigma x^n on a sign orthant, so the symbol is the constant sigma n! there; the
  // tableau would only add cancellation error for clustered tuples.
  if (std::all_of(values.begin(), values.end(), [](double v) { return v > 0.0; })) return factorial(n);
  if (std::all_of(values.begin(), values.end(), [](double v) { return v < 0.0; })) return -factorial(n);
  // Degree-0 homogeneity: rescale, then merge only values of one sign within a relative gap,
  // so tuples spread over many scales keep their distinct nodes.
  std::vector<double> z(values.begin(), values.end());
  for (double& v : z) v /= scale;
  std::sort(z.begin(), z.end());
  std::vector<std::size_t> block(z.size(), 0);
  for (std::size_t i = 1; i < z.size(); ++i) {
    const double a = z[i - 1], b = z[i];
    const bool merge = (a == b) || ((a > 0) == (b > 0) && a != 0.0 && b != 0.0 &&
                                    b - a <= 1e-12 * std::max(std::abs(a), std::abs(b)));
    block[i] = merge ? block[i - 1] : block[i - 1] + 1;
  }
  if (block.back() == 0 && z[0] == 0.0) return 0.0;  // single block at 0
  for (std::size_t i = 1; i < z.size(); ++i) {
    if (block[i] == block[i - 1]) z[i] = z[i - 1];
  }
  return factorial(n) * confluent_tableau(make_abs_power(n), z, block);
}

}  // namespace schurlab

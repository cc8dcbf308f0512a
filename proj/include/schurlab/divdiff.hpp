#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace schurlab {

/// A scalar function together with its derivatives up to order_max.
struct SmoothFunction {
  int order_max = 0;
  std::function<double(double, int)> derivative;
  std::string label;
  /// True when the top derivative jumps at 0 (the a_n family).
  bool singular_at_zero = false;

  double eval(double x, int d = 0) const;
};

/// a_n(s) = |s| s^{n-1}; order_max = n.
SmoothFunction make_abs_power(int n);
/// Polynomial with ascending coefficients.
SmoothFunction make_polynomial(std::vector<double> coefficients, std::string label = "poly");
/// x^k.
SmoothFunction make_monomial(int k);
SmoothFunction make_exp();
SmoothFunction make_sin();

double factorial(int n);

/// Default separation below which two nodes count as one: 1e-12 (1 + max|x|).
double node_tolerance(double max_abs);

/// Distinct nodes with multiplicities; the divided-difference order is |alpha| - 1.
class NodeVector {
 public:
  NodeVector() = default;
  NodeVector(std::vector<double> nodes, std::vector<int> multiplicities);

  /// Every node with multiplicity one.
  static NodeVector simple(std::vector<double> nodes);
  /// Groups raw values closer than node_tolerance into blocks, in order of first appearance.
  static NodeVector from_values(std::span<const double> values);

  std::size_t size() const { return nodes_.size(); }
  int order() const { return total_ - 1; }
  int total_multiplicity() const { return total_; }
  double node(std::size_t i) const { return nodes_.at(i); }
  int multiplicity(std::size_t i) const { return multiplicities_.at(i); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<int>& multiplicities() const { return multiplicities_; }
  double max_abs() const;
  /// Nodes repeated according to multiplicity, blocks contiguous.
  std::vector<double> expanded() const;

 private:
  std::vector<double> nodes_;
  std::vector<int> multiplicities_;
  int total_ = 0;
};

enum class DivDiffScale {
  /// f^{[n]}(x,...,x) = f^{(n)}(x) / n!.
  Recursive,
  /// Mean of f^{(n)} over the simplex, i.e. n! times the recursive value.
  SimplexAverage,
};

/// Confluent Newton tableau.
double divdiff_eval(const SmoothFunction& f, const NodeVector& nodes,
                    DivDiffScale scale = DivDiffScale::Recursive);

struct OracleEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
};

/// Monte-Carlo simplex average of f^{(n)} / n!, reproducible from seed.
OracleEstimate divdiff_simplex_oracle(const SmoothFunction& f, const NodeVector& nodes,
                                      long samples, unsigned long long seed);

/// n! a_n^{[n]}(values): the symbol used by the lower-bound constructions.
/// Evaluated after rescaling to unit max (the value is scale invariant).
double abs_power_symbol(int n, std::span<const double> values);

}  // namespace schurlab

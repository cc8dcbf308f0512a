#include "schurlab/reduction.hpp"

#include <cmath>

#include "schurlab/errors.hpp"
#include "schurlab/polynomial.hpp"

namespace schurlab {

double ReductionExpansion::evaluate(const SmoothFunction& f) const {
  double acc = 0.0;
  for (const auto& t : terms) acc += t.coefficient * divdiff_eval(f, t.nodes);
  return acc;
}

NodeVector merge_blocks(const std::vector<std::pair<double, int>>& blocks) {
  double max_abs = 0.0;
  for (const auto& [v, m] : blocks) {
    if (m > 0) max_abs = std::max(max_abs, std::abs(v));
  }
  const double tau = node_tolerance(max_abs);
  std::vector<double> nodes;
  std::vector<int> mult;
  for (const auto& [v, m] : blocks) {
    if (m <= 0) continue;
    std::size_t b = 0;
    while (b < nodes.size() && std::abs(nodes[b] - v) > tau) ++b;
    if (b == nodes.size()) {
      nodes.push_back(v);
      mult.push_back(m);
    } else {
      mult[b] += m;
    }
  }
  return NodeVector(std::move(nodes), std::move(mult));
}

namespace {

void check_pair(const NodeVector& nodes, std::size_t i, std::size_t j) {
  if (i >= nodes.size() || j >= nodes.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "reduction: node index out of range");
  }
  if (i == j || std::abs(nodes.node(i) - nodes.node(j)) <= node_tolerance(nodes.max_abs())) {
    throw Error(ErrorCode::DegenerateDenominator, "reduction: lambda_i and lambda_j coincide");
  }
}

std::vector<std::pair<double, int>> rest_blocks(const NodeVector& nodes, std::size_t i, std::size_t j) {
  std::vector<std::pair<double, int>> rest;
  for (std::size_t b = 0; b < nodes.size(); ++b) {
    if (b != i && b != j) rest.emplace_back(nodes.node(b), nodes.multiplicity(b));
  }
  return rest;
}

}  // namespace

ReductionExpansion reduce_general(const NodeVector& nodes, std::size_t i, std::size_t j, double xi) {
  check_pair(nodes, i, j);
  const double li = nodes.node(i), lj = nodes.node(j);
  const int ai = nodes.multiplicity(i), aj = nodes.multiplicity(j);
  // u + v = 1.
  const double u = (li - xi) / (li - lj);
  const double v = (xi - lj) / (li - lj);
  const auto rest = rest_blocks(nodes, i, j);

  ReductionExpansion out;
  out.source = ai == 1 && aj == 1 ? ReductionSource::InsertXi : ReductionSource::General;
  for (int l = 0; l < ai; ++l) {
    const double c = static_cast<double>(binomial(aj + l - 1, l)) * std::pow(u, aj) * std::pow(v, l);
    std::vector<std::pair<double, int>> blocks{{li, ai - l}, {xi, aj + l}};
    blocks.insert(blocks.end(), rest.begin(), rest.end());
    out.terms.push_back({c, merge_blocks(blocks)});
  }
  for (int l = 0; l < aj; ++l) {
    const double c = static_cast<double>(binomial(ai + l - 1, l)) * std::pow(u, l) * std::pow(v, ai);
    std::vector<std::pair<double, int>> blocks{{xi, ai + l}, {lj, aj - l}};
    blocks.insert(blocks.end(), rest.begin(), rest.end());
    out.terms.push_back({c, merge_blocks(blocks)});
  }
  return out;
}

ReductionExpansion reduce_algebraic(const NodeVector& nodes, std::size_t i, std::size_t j, std::size_t k) {
  if (k >= nodes.size()) throw Error(ErrorCode::IndexOutOfRange, "reduction: node index out of range");
  ReductionExpansion out = reduce_general(nodes, i, j, nodes.node(k));
  out.source = ReductionSource::Algebraic;
  return out;
}

ReductionExpansion reduce_zero_insert(std::span<const double> t, std::size_t i, std::size_t j) {
  if (i >= t.size() || j >= t.size()) throw Error(ErrorCode::IndexOutOfRange, "zero insertion: index out of range");
  double max_abs = 0.0;
  for (double x : t) max_abs = std::max(max_abs, std::abs(x));
  const double tau = node_tolerance(max_abs);
  if (i == j || std::abs(t[i] - t[j]) <= tau) {
    throw Error(ErrorCode::DegenerateDenominator, "zero insertion: t_i and t_j coincide");
  }
  if (std::abs(t[i]) <= tau || std::abs(t[j]) <= tau) {
    throw Error(ErrorCode::ZeroNode, "zero insertion: t_i and t_j must be nonzero");
  }
  ReductionExpansion out;
  out.source = ReductionSource::ZeroInsert;
  std::vector<double> a(t.begin(), t.end()), b(t.begin(), t.end());
  a[j] = 0.0;
  b[i] = 0.0;
  out.terms.push_back({t[i] / (t[i] - t[j]), NodeVector::from_values(a)});
  out.terms.push_back({-t[j] / (t[i] - t[j]), NodeVector::from_values(b)});
  return out;
}

}  // namespace schurlab

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "schurlab/divdiff.hpp"

namespace schurlab {

enum class ReductionSource { InsertXi, General, Algebraic, ZeroInsert };

struct ReductionTerm {
  double coefficient = 0.0;
  NodeVector nodes;
};

/// A finite linear combination of divided differences equal to a given one.
struct ReductionExpansion {
  std::vector<ReductionTerm> terms;
  ReductionSource source = ReductionSource::General;

  double evaluate(const SmoothFunction& f) const;
};

/// Blocks (value, multiplicity) merged when values coincide within node_tolerance;
/// zero multiplicities are dropped.
NodeVector merge_blocks(const std::vector<std::pair<double, int>>& blocks);

/// Trades blocks i and j for blocks at xi; alpha_i + alpha_j terms.
/// Tagged InsertXi when both multiplicities are one.
ReductionExpansion reduce_general(const NodeVector& nodes, std::size_t i, std::size_t j, double xi);

/// reduce_general with xi = node k, which absorbs the removed mass.
ReductionExpansion reduce_algebraic(const NodeVector& nodes, std::size_t i, std::size_t j, std::size_t k);

/// Replaces t_j (resp. t_i) by zero; two terms.
ReductionExpansion reduce_zero_insert(std::span<const double> t, std::size_t i, std::size_t j);

}  // namespace schurlab

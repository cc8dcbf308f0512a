#pragma once

#include <span>
#include <vector>

#include "json.hpp"
#include "schurlab/combinatorics.hpp"
#include "schurlab/divdiff.hpp"
#include "schurlab/polynomial.hpp"
#include "schurlab/rng.hpp"

namespace schurlab {

struct TableEntry {
  std::size_t sequence = 0;  // index into DecompositionTable::sequences
  std::vector<int> alpha;    // multiplicities over I_{F,k+1}, ascending
  MultiVarPolynomial Q;
};

/// Polynomials Q_{F,k,alpha}: on pairwise-distinct lambda,
/// f^{[n]}(lambda) = sum_{F,alpha} (prod_l theta_{F,l}) Q(zeta_{F,1..k}) f[lambda_{I_{F,k+1}}^{(alpha)}].
struct DecompositionTable {
  int n = 0;
  int k = 0;
  std::vector<ChoiceSequence> sequences;  // F_{n,k}, enumeration order
  std::vector<TableEntry> entries;        // sorted by (sequence, alpha)

  const ChoiceSequence& sequence_of(const TableEntry& e) const { return sequences[e.sequence]; }
};

/// Exact induction over k; n <= 6.
DecompositionTable build_Q_table(int n, int k);

/// Right-hand side of the core expansion at lambda.
double evaluate_core_expansion(const SmoothFunction& f, std::span<const double> lambda,
                               const DecompositionTable& table);

/// Product of partition weights theta_{F,l}(lambda) for l = 1..F.k().
double theta_product(const ChoiceSequence& F, std::span<const double> lambda);

/// The degree-0 homogeneous symbol H_{F,alpha} in the coordinates xi_{F,1..n}, for k = n-1.
class HSymbol {
 public:
  HSymbol(const ChoiceSequence& F, std::vector<int> alpha, MultiVarPolynomial Q);

  const ChoiceSequence& sequence() const { return F_; }
  const std::vector<int>& alpha() const { return alpha_; }
  /// Margin m_k with H = 0 whenever |xi_{k+1}| > |xi_k| / m_k.
  double margin(int k) const;
  /// Extended by zero where the partition weights vanish.
  double operator()(std::span<const double> xi) const;

 private:
  ChoiceSequence F_;
  std::vector<int> alpha_;
  MultiVarPolynomial Q_;
  std::vector<std::vector<std::vector<double>>> T_;  // per level k = 1..n-1
  std::vector<int> pivot_;
  std::vector<std::vector<double>> R_;
  std::vector<std::pair<std::vector<int>, double>> terms_;  // Q in floating point
};

/// Validating wrapper: xi_j must be nonzero for j < n.
double evaluate_H(const ChoiceSequence& F, const std::vector<int>& alpha,
                  const DecompositionTable& table, std::span<const double> xi);

struct FinalTerm {
  HSymbol H;
  int lower = 0;  // F_n^-, carries alpha[0]
  int upper = 0;  // F_n, carries alpha[1]
};

/// Terms of f^{[n]}(lambda) = sum H(xi_{F,1..n}(lambda)) f[lambda_lower^{(a-)}, lambda_upper^{(a+)}].
struct FinalDecomposition {
  int n = 0;
  DecompositionTable table;
  std::vector<FinalTerm> terms;
};

/// n in {2, 3}.
FinalDecomposition build_final_decomposition(int n);

/// xi_{F,1..n}(lambda).
std::vector<double> xi_coordinates(const ChoiceSequence& F, std::span<const double> lambda);

/// |f^{[n]}(lambda) - sum of the final terms|.
double verify_final_decomposition(const SmoothFunction& f, std::span<const double> lambda,
                                  const FinalDecomposition& decomposition);
double verify_final_decomposition(const SmoothFunction& f, std::span<const double> lambda, int n);

/// Random point with all pairwise gaps >= 1e-3 times the spread, coordinates in [-1, 1].
std::vector<double> sample_separated_point(int n, CounterRng& rng);

nlohmann::json table_to_json(const DecompositionTable& table);

}  // namespace schurlab

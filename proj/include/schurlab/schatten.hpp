#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "json.hpp"
#include "schurlab/divdiff.hpp"

namespace schurlab {

using DenseMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// l^p norm of the singular values; p in [1, inf].
double schatten_norm(const DenseMatrix& x, double p);

/// G with <x, G> = ||x||_p and ||G||_{p*} = 1 (norming functional); zero for x = 0.
DenseMatrix dual_element(const DenseMatrix& x, double p);

/// Index tuples (s_0, ..., s_n) over an ordered index set, values tabulated or constant.
class DiscreteSymbol {
 public:
  using Generator = std::function<Complex(std::span<const std::size_t>)>;

  /// Tabulates gen over all position tuples.
  static DiscreteSymbol tabulate(int arity, std::vector<long> index_set, const Generator& gen);
  static DiscreteSymbol constant(int arity, std::vector<long> index_set, Complex c);

  int arity() const { return arity_; }
  std::size_t dim() const { return index_set_.size(); }
  const std::vector<long>& index_set() const { return index_set_; }
  bool is_constant() const { return values_.empty(); }
  Complex constant_value() const { return constant_; }
  /// Row-major over positions; empty for constant symbols.
  const std::vector<Complex>& values() const { return values_; }
  Complex operator()(std::span<const std::size_t> positions) const;
  double sup_norm() const;

 private:
  int arity_ = 1;
  std::vector<long> index_set_;
  std::vector<Complex> values_;
  Complex constant_{0.0, 0.0};
};

/// (T_phi(x_1..x_n))[s_0, s_n] = sum phi(s_0..s_n) x_1[s_0,s_1] ... x_n[s_{n-1},s_n].
DenseMatrix schur_multiply(const DiscreteSymbol& phi, const std::vector<DenseMatrix>& xs);

/// Adjoint of the linear map x_slot -> T_phi(..., x_slot, ...) applied to g.
DenseMatrix slot_adjoint(const DiscreteSymbol& phi, const std::vector<DenseMatrix>& xs, std::size_t slot,
                         const DenseMatrix& g);

enum class Truncation { Upper, Lower, Diagonal };

/// Upper keeps s < t, Lower keeps s > t, Diagonal keeps s = t.
DenseMatrix truncate(const DenseMatrix& x, Truncation kind);

/// Indicator symbol of a truncation, arity one.
DiscreteSymbol truncation_symbol(Truncation kind, std::vector<long> index_set);

/// Variant 1: n! a_n^{[n]}(q^{k i_0}, q^{l i_1}, ..., q^{l i_{n-1}}, -q^{k i_n}).
/// Variant 2: n! a_n^{[n]}(q^{k i_0}, -q^{k i_1}, q^{k i_2}, q^{l i_3}, ..., q^{l i_n}), n >= 2.
DiscreteSymbol lattice_symbol(int variant, double q, int k, int l, int n, std::vector<long> index_set);

/// f^{[n]} restricted to grid tuples, repeats evaluated confluently.
DiscreteSymbol sampled_symbol(const SmoothFunction& f, const std::vector<double>& grid, int n,
                              DivDiffScale scale = DivDiffScale::Recursive);

nlohmann::json matrix_to_json(const DenseMatrix& x);
DenseMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json symbol_to_json(const DiscreteSymbol& phi);
DiscreteSymbol symbol_from_json(const nlohmann::json& j);

}  // namespace schurlab

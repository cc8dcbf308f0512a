#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "schurlab/polynomial.hpp"

namespace schurlab {

enum class Sign { Plus, Minus };

struct Pick {
  int index = 0;
  Sign sign = Sign::Plus;
  bool operator==(const Pick&) const = default;
  auto operator<=>(const Pick& o) const {
    if (index != o.index) return index <=> o.index;
    return static_cast<int>(sign) <=> static_cast<int>(o.sign);
  }
};

struct IndexData {
  std::vector<int> index_set;   // I_{F,l}, ascending
  std::optional<int> pick;      // F_l
  std::optional<int> lower;     // F_l^-
  std::optional<int> upper;     // F_l^+ (cyclic)
};

/// Choice sequence over {0..n}: each pick is a non-minimal element of the current
/// index set; Plus deletes the pick, Minus deletes its lower neighbour.
class ChoiceSequence {
 public:
  ChoiceSequence(int n, std::vector<Pick> picks);

  int n() const { return n_; }
  int k() const { return static_cast<int>(picks_.size()); }
  const std::vector<Pick>& picks() const { return picks_; }
  /// I_{F,l} for 1 <= l <= k+1.
  const std::vector<int>& index_set(int l) const;
  /// Appends one pick; the result has k+1 picks.
  ChoiceSequence extended(Pick p) const;
  std::string to_string() const;

  bool operator==(const ChoiceSequence& o) const { return n_ == o.n_ && picks_ == o.picks_; }
  bool operator<(const ChoiceSequence& o) const {
    return n_ != o.n_ ? n_ < o.n_ : picks_ < o.picks_;
  }

 private:
  int n_;
  std::vector<Pick> picks_;
  std::vector<std::vector<int>> sets_;
};

/// Neighbours of i inside a sorted set: (largest below, smallest above, cyclic).
std::pair<int, int> neighbours(const std::vector<int>& set, int i);

/// F_{n,k} in lexicographic order of picks, Plus before Minus.
std::vector<ChoiceSequence> enumerate_choice_sequences(int n, int k);

IndexData index_data(const ChoiceSequence& F, int l);

struct XiZeta {
  double xi = 0.0;
  std::optional<double> zeta;  // absent when l = n
};

/// xi_{F,l} = lambda_{F_l} - lambda_{F_l^-} and the sign-dependent ratio zeta_{F,l}.
XiZeta zeta_xi_eval(const ChoiceSequence& F, int l, std::span<const double> lambda);

bool is_in_D(std::span<const double> lambda);
bool is_in_Delta(std::span<const double> lambda, const std::vector<int>& I);

using RationalMatrix = std::vector<std::vector<Rational>>;

/// For F in F_{n,n-1} and 1 <= k <= n:
/// T(F,k) row a expresses lambda_{i_a} - lambda_{i_{a-1}} over I_{F,k} in the basis xi_{F,k..n};
/// R row l expresses the numerator of zeta_{F,l} in xi_{F,l+1..n}. Column j of T is xi_{F,k+j},
/// column c of R is xi_{F,c+2}; rows of R are l = 1..n-1.
struct DifferenceBasis {
  RationalMatrix T;
  RationalMatrix R;
  int k = 1;
  /// Row of T equal to e_k: position of F_k in I_{F,k}.
  int pivot_row = 0;
};

DifferenceBasis difference_basis(const ChoiceSequence& F, int k);

/// Exact coefficients c with lambda_a - lambda_b = sum_j c_j xi_{F,j}, j = first..n.
std::vector<Rational> express_difference(const ChoiceSequence& F, int first, int a, int b);

struct SchattenParams {
  std::vector<double> p_list;

  static SchattenParams equal(int n, double p);  // p_i = n p
  int n() const { return static_cast<int>(p_list.size()); }
  double p() const;
  /// (sum_{s=i+1}^{j} 1/p_s)^{-1}.
  double partial(int i, int j) const;
  void validate() const;
};

double conjugate_exponent(double p);
double sharp(double p);

/// Sum over F in F_{n,n-1} of prod_l sharp(p_{(F_l^-; F_l)}).
double theoretical_bound(const SchattenParams& params);

}  // namespace schurlab

#include "schurlab/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "schurlab/divdiff.hpp"
#include "schurlab/errors.hpp"

namespace schurlab {

std::pair<int, int> neighbours(const std::vector<int>& set, int i) {
  const auto it = std::lower_bound(set.begin(), set.end(), i);
  if (it == set.end() || *it != i || it == set.begin()) {
    throw Error(ErrorCode::IndexOutOfRange, "neighbours: index absent or minimal");
  }
  const int lower = *(it - 1);
  const int upper = (it + 1 == set.end()) ? set.front() : *(it + 1);
  return {lower, upper};
}

ChoiceSequence::ChoiceSequence(int n, std::vector<Pick> picks) : n_(n), picks_(std::move(picks)) {
  if (n < 1 || picks_.size() > static_cast<std::size_t>(n)) {
    throw Error(ErrorCode::InvalidArgument, "ChoiceSequence: need n >= 1 and at most n picks");
  }
  std::vector<int> set(static_cast<std::size_t>(n) + 1);
  std::iota(set.begin(), set.end(), 0);
  sets_.push_back(set);
  for (const Pick& p : picks_) {
    const auto [lower, upper] = neighbours(set, p.index);
    (void)upper;
    const int removed = p.sign == Sign::Plus ? p.index : lower;
    set.erase(std::find(set.begin(), set.end(), removed));
    sets_.push_back(set);
  }
}

const std::vector<int>& ChoiceSequence::index_set(int l) const {
  if (l < 1 || l > k() + 1) throw Error(ErrorCode::IndexOutOfRange, "index_set: l out of range");
  return sets_[static_cast<std::size_t>(l - 1)];
}

ChoiceSequence ChoiceSequence::extended(Pick p) const {
  std::vector<Pick> picks = picks_;
  picks.push_back(p);
  return ChoiceSequence(n_, std::move(picks));
}

std::string ChoiceSequence::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < picks_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(picks_[i].index) + (picks_[i].sign == Sign::Plus ? ",+" : ",-");
  }
  return s + ")";
}

std::vector<ChoiceSequence> enumerate_choice_sequences(int n, int k) {
  if (k < 0 || k > n - 1) throw Error(ErrorCode::InvalidArgument, "enumerate: need 0 <= k <= n-1");
  std::vector<ChoiceSequence> level{ChoiceSequence(n, {})};
  for (int step = 0; step < k; ++step) {
    std::vector<ChoiceSequence> next;
    for (const auto& F : level) {
      const auto& I = F.index_set(step + 1);
      for (std::size_t a = 1; a < I.size(); ++a) {
        next.push_back(F.extended({I[a], Sign::Plus}));
        next.push_back(F.extended({I[a], Sign::Minus}));
      }
    }
    level = std::move(next);
  }
  return level;
}

IndexData index_data(const ChoiceSequence& F, int l) {
  IndexData d;
  d.index_set = F.index_set(l);
  if (l <= F.k()) {
    const int pick = F.picks()[static_cast<std::size_t>(l - 1)].index;
    const auto [lower, upper] = neighbours(d.index_set, pick);
    d.pick = pick;
    d.lower = lower;
    d.upper = upper;
  } else if (d.index_set.size() == 2) {
    d.pick = d.index_set[1];
    d.lower = d.index_set[0];
  }
  return d;
}

XiZeta zeta_xi_eval(const ChoiceSequence& F, int l, std::span<const double> lambda) {
  if (lambda.size() != static_cast<std::size_t>(F.n()) + 1) {
    throw Error(ErrorCode::DimensionMismatch, "zeta_xi_eval: lambda must have n+1 entries");
  }
  const IndexData d = index_data(F, l);
  if (!d.pick) throw Error(ErrorCode::IndexOutOfRange, "zeta_xi_eval: F_l undefined for this l");
  XiZeta out;
  out.xi = lambda[*d.pick] - lambda[*d.lower];
  if (!d.upper) return out;
  if (out.xi == 0.0) throw Error(ErrorCode::DegenerateDenominator, "zeta_xi_eval: xi_{F,l} = 0");
  const bool plus = F.picks()[static_cast<std::size_t>(l - 1)].sign == Sign::Plus;
  const double num = plus ? lambda[*d.upper] - lambda[*d.lower] : lambda[*d.pick] - lambda[*d.upper];
  out.zeta = num / out.xi;
  return out;
}

bool is_in_D(std::span<const double> lambda) {
  double m = 0.0;
  for (double x : lambda) m = std::max(m, std::abs(x));
  const double tau = node_tolerance(m);
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    for (std::size_t j = i + 1; j < lambda.size(); ++j) {
      if (std::abs(lambda[i] - lambda[j]) <= tau) return false;
    }
  }
  return true;
}

bool is_in_Delta(std::span<const double> lambda, const std::vector<int>& I) {
  double m = 0.0;
  for (double x : lambda) m = std::max(m, std::abs(x));
  const double tau = node_tolerance(m);
  for (int i : I) {
    if (std::abs(lambda[static_cast<std::size_t>(i)] - lambda[static_cast<std::size_t>(I.front())]) > tau) {
      return false;
    }
  }
  return true;
}

namespace {

/// Solves the consistent overdetermined system A x = b exactly (A has full column rank).
std::vector<Rational> solve_exact(RationalMatrix A, std::vector<Rational> b) {
  const std::size_t rows = A.size(), cols = rows ? A[0].size() : 0;
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && A[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(A[p], A[r]);
    std::swap(b[p], b[r]);
    for (std::size_t q = 0; q < rows; ++q) {
      if (q == r || A[q][c] == 0) continue;
      const Rational factor = A[q][c] / A[r][c];
      for (std::size_t cc = c; cc < cols; ++cc) A[q][cc] -= factor * A[r][cc];
      b[q] -= factor * b[r];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  if (pivot_cols.size() != cols) throw Error(ErrorCode::SingularSystem, "difference basis: rank deficient");
  for (std::size_t q = r; q < rows; ++q) {
    if (b[q] != 0) throw Error(ErrorCode::SingularSystem, "difference basis: inconsistent system");
  }
  std::vector<Rational> x(cols);
  for (std::size_t q = 0; q < r; ++q) x[pivot_cols[q]] = b[q] / A[q][pivot_cols[q]];
  return x;
}

}  // namespace

std::vector<Rational> express_difference(const ChoiceSequence& F, int first, int a, int b) {
  const int n = F.n();
  if (F.k() != n - 1) throw Error(ErrorCode::InvalidArgument, "difference basis: F must have n-1 picks");
  if (first < 1 || first > n) throw Error(ErrorCode::IndexOutOfRange, "difference basis: k out of range");
  const std::size_t rows = static_cast<std::size_t>(n) + 1;
  RationalMatrix A(rows, std::vector<Rational>(static_cast<std::size_t>(n - first + 1)));
  for (int j = first; j <= n; ++j) {
    const IndexData d = index_data(F, j);
    A[static_cast<std::size_t>(*d.pick)][static_cast<std::size_t>(j - first)] += 1;
    A[static_cast<std::size_t>(*d.lower)][static_cast<std::size_t>(j - first)] -= 1;
  }
  std::vector<Rational> rhs(rows);
  rhs[static_cast<std::size_t>(a)] += 1;
  rhs[static_cast<std::size_t>(b)] -= 1;
  return solve_exact(std::move(A), std::move(rhs));
}

DifferenceBasis difference_basis(const ChoiceSequence& F, int k) {
  const int n = F.n();
  if (F.k() != n - 1) throw Error(ErrorCode::InvalidArgument, "difference basis: F must have n-1 picks");
  if (k < 1 || k > n) throw Error(ErrorCode::IndexOutOfRange, "difference basis: k out of range");
  DifferenceBasis out;
  out.k = k;
  const auto& I = F.index_set(k);
  const int Fk = *index_data(F, k).pick;
  for (std::size_t a = 1; a < I.size(); ++a) {
    out.T.push_back(express_difference(F, k, I[a], I[a - 1]));
    if (I[a] == Fk) out.pivot_row = static_cast<int>(a - 1);
  }
  for (int l = 1; l <= n - 1; ++l) {
    const IndexData d = index_data(F, l);
    const bool plus = F.picks()[static_cast<std::size_t>(l - 1)].sign == Sign::Plus;
    const int a = plus ? *d.upper : *d.pick;
    const int b = plus ? *d.lower : *d.upper;
    const std::vector<Rational> tail = express_difference(F, l + 1, a, b);
    std::vector<Rational> row(static_cast<std::size_t>(n - 1));
    for (std::size_t j = 0; j < tail.size(); ++j) row[static_cast<std::size_t>(l - 1) + j] = tail[j];
    out.R.push_back(std::move(row));
  }
  return out;
}

SchattenParams SchattenParams::equal(int n, double p) {
  return {std::vector<double>(static_cast<std::size_t>(n), n * p)};
}

double SchattenParams::p() const { return partial(0, n()); }

double SchattenParams::partial(int i, int j) const {
  if (i < 0 || j > n() || i >= j) throw Error(ErrorCode::IndexOutOfRange, "partial exponent: need 0 <= i < j <= n");
  double s = 0.0;
  for (int t = i + 1; t <= j; ++t) s += 1.0 / p_list[static_cast<std::size_t>(t - 1)];
  return 1.0 / s;
}

void SchattenParams::validate() const {
  if (p_list.empty()) throw Error(ErrorCode::InvalidExponents, "Schatten exponents: empty list");
  for (double q : p_list) {
    if (!(q > 1.0) || !std::isfinite(q)) throw Error(ErrorCode::InvalidExponents, "Schatten exponents: p_i must lie in (1, inf)");
  }
  const double p = this->p();
  if (!(p > 1.0)) throw Error(ErrorCode::InvalidExponents, "Schatten exponents: p must lie in (1, inf)");
}

double conjugate_exponent(double p) {
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

double sharp(double p) { return std::max(p, conjugate_exponent(p)); }

double theoretical_bound(const SchattenParams& params) {
  params.validate();
  const int n = params.n();
  double total = 0.0;
  for (const auto& F : enumerate_choice_sequences(n, n - 1)) {
    double term = 1.0;
    for (int l = 1; l <= n; ++l) {
      const IndexData d = index_data(F, l);
      term *= sharp(params.partial(*d.lower, *d.pick));
    }
    total += term;
  }
  return total;
}

}  // namespace schurlab

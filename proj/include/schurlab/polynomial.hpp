#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace schurlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// "num/den" with den > 0; integers print as "num/1".
std::string rational_to_string(const Rational& r);
Rational rational_from_string(const std::string& s);

BigInt binomial(int n, int k);

/// Exact polynomial in a fixed number of variables; zero coefficients are never stored.
class MultiVarPolynomial {
 public:
  using Exponents = std::vector<int>;

  explicit MultiVarPolynomial(int num_vars = 0) : num_vars_(num_vars) {}

  static MultiVarPolynomial constant(int num_vars, const Rational& c);
  static MultiVarPolynomial variable(int num_vars, int index);

  int num_vars() const { return num_vars_; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rational coefficient(const Exponents& e) const;
  int total_degree() const;
  /// Smallest exponent of variable v over all monomials (0 for the zero polynomial).
  int min_degree_in(int v) const;

  void add_term(const Exponents& e, const Rational& c);
  MultiVarPolynomial& operator+=(const MultiVarPolynomial& other);
  MultiVarPolynomial operator+(const MultiVarPolynomial& other) const;
  MultiVarPolynomial operator-(const MultiVarPolynomial& other) const;
  MultiVarPolynomial operator*(const MultiVarPolynomial& other) const;
  MultiVarPolynomial scaled(const Rational& c) const;
  bool operator==(const MultiVarPolynomial& other) const = default;

  /// this(x_1..x_k) * u(x_{k+1}) for a univariate u.
  MultiVarPolynomial append_variable(const MultiVarPolynomial& univariate) const;

  double evaluate(std::span<const double> x) const;
  std::string to_string() const;

 private:
  int num_vars_;
  std::map<Exponents, Rational> terms_;
};

/// p_{a,l}(x) = C(a+l-1, l) x^a (1-x)^l.
MultiVarPolynomial p_poly(int a, int l);

}  // namespace schurlab

#include "schurlab/polynomial.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "schurlab/errors.hpp"

namespace schurlab {

std::string rational_to_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

Rational rational_from_string(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "malformed rational '" + s + "'");
  }
}

BigInt binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

MultiVarPolynomial MultiVarPolynomial::constant(int num_vars, const Rational& c) {
  MultiVarPolynomial p(num_vars);
  p.add_term(Exponents(static_cast<std::size_t>(num_vars), 0), c);
  return p;
}

MultiVarPolynomial MultiVarPolynomial::variable(int num_vars, int index) {
  MultiVarPolynomial p(num_vars);
  Exponents e(static_cast<std::size_t>(num_vars), 0);
  e.at(static_cast<std::size_t>(index)) = 1;
  p.add_term(e, 1);
  return p;
}

Rational MultiVarPolynomial::coefficient(const Exponents& e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

int MultiVarPolynomial::total_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

int MultiVarPolynomial::min_degree_in(int v) const {
  if (terms_.empty()) return 0;
  int d = std::numeric_limits<int>::max();
  for (const auto& [e, c] : terms_) d = std::min(d, e.at(static_cast<std::size_t>(v)));
  return d;
}

void MultiVarPolynomial::add_term(const Exponents& e, const Rational& c) {
  if (static_cast<int>(e.size()) != num_vars_) {
    throw Error(ErrorCode::DimensionMismatch, "polynomial: exponent length mismatch");
  }
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MultiVarPolynomial& MultiVarPolynomial::operator+=(const MultiVarPolynomial& other) {
  if (other.num_vars_ != num_vars_) throw Error(ErrorCode::DimensionMismatch, "polynomial: variable count mismatch");
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

MultiVarPolynomial MultiVarPolynomial::operator+(const MultiVarPolynomial& other) const {
  MultiVarPolynomial r = *this;
  r += other;
  return r;
}

MultiVarPolynomial MultiVarPolynomial::operator-(const MultiVarPolynomial& other) const {
  return *this + other.scaled(-1);
}

MultiVarPolynomial MultiVarPolynomial::operator*(const MultiVarPolynomial& other) const {
  if (other.num_vars_ != num_vars_) throw Error(ErrorCode::DimensionMismatch, "polynomial: variable count mismatch");
  MultiVarPolynomial r(num_vars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : other.terms_) {
      Exponents e(ea);
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

MultiVarPolynomial MultiVarPolynomial::scaled(const Rational& c) const {
  MultiVarPolynomial r(num_vars_);
  for (const auto& [e, v] : terms_) r.add_term(e, v * c);
  return r;
}

MultiVarPolynomial MultiVarPolynomial::append_variable(const MultiVarPolynomial& univariate) const {
  if (univariate.num_vars_ != 1) throw Error(ErrorCode::DimensionMismatch, "append_variable: expected univariate factor");
  MultiVarPolynomial r(num_vars_ + 1);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : univariate.terms_) {
      Exponents e(ea);
      e.push_back(eb[0]);
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

double MultiVarPolynomial::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != num_vars_) throw Error(ErrorCode::DimensionMismatch, "polynomial: argument count mismatch");
  double acc = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = static_cast<double>(c);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] != 0) m *= std::pow(x[i], e[i]);
    }
    acc += m;
  }
  return acc;
}

std::string MultiVarPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << rational_to_string(c) << ")";
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] != 0) os << "*x" << (i + 1) << "^" << e[i];
    }
  }
  return os.str();
}

MultiVarPolynomial p_poly(int a, int l) {
  if (a < 1 || l < 0) throw Error(ErrorCode::InvalidArgument, "p_poly: need a >= 1, l >= 0");
  MultiVarPolynomial p(1);
  const BigInt lead = binomial(a + l - 1, l);
  for (int r = 0; r <= l; ++r) {
    BigInt c = lead * binomial(l, r);
    if (r % 2 == 1) c = -c;
    p.add_term({a + r}, Rational(c));
  }
  return p;
}

}  // namespace schurlab

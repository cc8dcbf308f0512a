#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "schurlab/divdiff.hpp"
#include "schurlab/errors.hpp"
#include "schurlab/rng.hpp"

using namespace schurlab;

namespace {

/// Textbook recursion on raw values, confluent pairs through derivatives; independent of the tableau.
double recursive_divdiff(const SmoothFunction& f, std::vector<double> z) {
  std::sort(z.begin(), z.end());
  const std::size_t m = z.size();
  if (z.front() == z.back()) return f.eval(z.front(), static_cast<int>(m) - 1) / factorial(static_cast<int>(m) - 1);
  std::vector<double> a(z.begin() + 1, z.end()), b(z.begin(), z.end() - 1);
  return (recursive_divdiff(f, a) - recursive_divdiff(f, b)) / (z.back() - z.front());
}

}  // namespace

TEST_CASE("smooth functions report derivatives") {
  const auto p = make_polynomial({1.0, -2.0, 0.0, 3.0});  // 1 - 2x + 3x^3
  CHECK(p.eval(2.0) == doctest::Approx(21.0));
  CHECK(p.eval(2.0, 1) == doctest::Approx(34.0));
  CHECK(p.eval(2.0, 2) == doctest::Approx(36.0));
  CHECK(p.eval(2.0, 3) == doctest::Approx(18.0));
  CHECK(p.eval(2.0, 4) == 0.0);
  CHECK(make_exp().eval(1.0, 5) == doctest::Approx(std::exp(1.0)));
  CHECK(make_sin().eval(0.3, 3) == doctest::Approx(-std::cos(0.3)));
}

TEST_CASE("generalized absolute value") {
  CHECK(make_abs_power(1).eval(-2.0) == 2.0);
  // |s| s^{n-1}: the form whose n-th derivative is sign(s) n!.
  CHECK(make_abs_power(3).eval(-2.0) == 8.0);
  CHECK(make_abs_power(3).eval(2.0) == 8.0);
  CHECK(make_abs_power(2).eval(-5.0, 2) == -2.0);
  CHECK(make_abs_power(4).eval(0.5, 4) == 24.0);
  CHECK_THROWS_AS(make_abs_power(2).eval(1.0, 3), Error);
}

TEST_CASE("node vectors validate and group") {
  CHECK_THROWS_AS(NodeVector({1.0, 1.0}, {1, 1}), Error);
  CHECK_THROWS_AS(NodeVector({1.0}, {0}), Error);
  CHECK_THROWS_AS(NodeVector({}, {}), Error);
  const double raw[] = {2.0, 1.0, 2.0 + 1e-14, 3.0, 1.0};
  const NodeVector v = NodeVector::from_values(raw);
  REQUIRE(v.size() == 3);
  CHECK(v.node(0) == 2.0);
  CHECK(v.multiplicity(0) == 2);
  CHECK(v.multiplicity(1) == 2);
  CHECK(v.order() == 4);
}

TEST_CASE("divided differences: closed forms") {
  CHECK(divdiff_eval(make_monomial(2), NodeVector::simple({3.0, 1.0})) == doctest::Approx(4.0));
  for (int n = 1; n <= 6; ++n) {
    std::vector<double> nodes;
    for (int i = 0; i <= n; ++i) nodes.push_back(0.7 * i - 1.3 + 0.01 * i * i);
    CHECK(divdiff_eval(make_monomial(n), NodeVector::simple(nodes)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(divdiff_eval(make_monomial(n - 1), NodeVector::simple(nodes))) < 1e-12);
  }
  CHECK(divdiff_eval(make_abs_power(2), NodeVector({1.0, -1.0}, {2, 1})) == doctest::Approx(0.5));
  CHECK(divdiff_eval(make_abs_power(3), NodeVector::simple({1, 2, 3, 4}), DivDiffScale::SimplexAverage) ==
        doctest::Approx(6.0));
  CHECK(divdiff_eval(make_exp(), NodeVector({0.0}, {2})) == doctest::Approx(1.0));
  CHECK(divdiff_eval(make_exp(), NodeVector({0.5}, {4})) == doctest::Approx(std::exp(0.5) / 6.0));
}

TEST_CASE("a_n at a single block at zero is fixed to zero") {
  CHECK(divdiff_eval(make_abs_power(2), NodeVector({0.0}, {3})) == 0.0);
  const double zeros[] = {0.0, 0.0, 0.0};
  CHECK(abs_power_symbol(2, zeros) == 0.0);
}

TEST_CASE("tableau agrees with the textbook recursion") {
  CounterRng rng(11);
  const SmoothFunction fs[] = {make_exp(), make_sin(), make_monomial(7)};
  for (int trial = 0; trial < 100; ++trial) {
    const int blocks = 1 + static_cast<int>(rng.next_u64() % 4);
    std::vector<double> nodes;
    std::vector<int> mult;
    std::vector<double> raw;
    for (int b = 0; b < blocks; ++b) {
      nodes.push_back(-2.0 + 1.1 * b + 0.2 * rng.uniform());
      mult.push_back(1 + static_cast<int>(rng.next_u64() % 3));
      raw.insert(raw.end(), static_cast<std::size_t>(mult.back()), nodes.back());
    }
    const SmoothFunction& f = fs[trial % 3];
    const double a = divdiff_eval(f, NodeVector(nodes, mult));
    const double b = recursive_divdiff(f, raw);
    CHECK(a == doctest::Approx(b).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("symbol of a_n: same-sign orthants and scale invariance") {
  CounterRng rng(3);
  for (int n = 1; n <= 4; ++n) {
    std::vector<double> v(static_cast<std::size_t>(n) + 1);
    for (double& x : v) x = rng.uniform(0.1, 5.0);
    CHECK(abs_power_symbol(n, v) == doctest::Approx(factorial(n)).epsilon(1e-12));
    for (double& x : v) x = -x;
    CHECK(abs_power_symbol(n, v) == doctest::Approx(-factorial(n)).epsilon(1e-12));
  }
  const double mixed[] = {0.3, -1.1, 2.0};
  const double scaled[] = {0.3e-7, -1.1e-7, 2.0e-7};
  CHECK(abs_power_symbol(2, mixed) == doctest::Approx(abs_power_symbol(2, scaled)).epsilon(1e-13));
  CHECK(abs_power_symbol(2, mixed) ==
        doctest::Approx(divdiff_eval(make_abs_power(2), NodeVector::simple({0.3, -1.1, 2.0}), DivDiffScale::SimplexAverage)));
}

TEST_CASE("symbol of a_n keeps nodes that differ only in scale") {
  // Exact value from high-precision evaluation of the same divided difference.
  const double v[] = {std::ldexp(1.0, -15), std::ldexp(1.0, -120), -std::ldexp(1.0, -45)};
  CHECK(abs_power_symbol(2, v) == doctest::Approx(1.99999999627).epsilon(1e-10));
}

TEST_CASE("simplex oracle") {
  const auto est = divdiff_simplex_oracle(make_monomial(3), NodeVector::simple({0.0, 1.0, -2.0, 0.5}), 10000, 1);
  CHECK(est.estimate == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(est.stderr_ < 1e-14);
  const NodeVector nodes({1.0, -1.0}, {2, 1});
  const auto a2 = divdiff_simplex_oracle(make_abs_power(2), nodes, 100000, 2);
  CHECK(std::abs(a2.estimate - 0.5) <= 3.0 * a2.stderr_ + 1e-12);
  const auto again = divdiff_simplex_oracle(make_abs_power(2), nodes, 100000, 2);
  CHECK(again.estimate == a2.estimate);
  CHECK_THROWS_AS(divdiff_simplex_oracle(make_abs_power(1), NodeVector::simple({1, 2, 3}), 10, 0), Error);
}

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "schurlab/combinatorics.hpp"
#include "schurlab/errors.hpp"
#include "schurlab/rng.hpp"

using namespace schurlab;

namespace {

/// Counts admissible sequences straight from the deletion rule.
long count_sequences(int n, int k) {
  std::function<long(std::vector<int>, int)> rec = [&](std::vector<int> set, int left) -> long {
    if (left == 0) return 1;
    long total = 0;
    for (std::size_t a = 1; a < set.size(); ++a) {
      std::vector<int> plus = set, minus = set;
      plus.erase(plus.begin() + static_cast<long>(a));
      minus.erase(minus.begin() + static_cast<long>(a) - 1);
      total += rec(plus, left - 1) + rec(minus, left - 1);
    }
    return total;
  };
  std::vector<int> all(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) all[static_cast<std::size_t>(i)] = i;
  return rec(all, k);
}

ChoiceSequence worked_example() {
  return ChoiceSequence(4, {{1, Sign::Plus}, {2, Sign::Minus}, {4, Sign::Minus}});
}

}  // namespace

TEST_CASE("enumeration") {
  const auto two = enumerate_choice_sequences(2, 1);
  CHECK(two.size() == 4);
  std::set<std::string> names;
  for (const auto& F : two) names.insert(F.to_string());
  CHECK(names == std::set<std::string>{"(1,+)", "(1,-)", "(2,+)", "(2,-)"});
  for (int n = 1; n <= 5; ++n) {
    for (int k = 0; k < n; ++k) CHECK(static_cast<long>(enumerate_choice_sequences(n, k).size()) == count_sequences(n, k));
  }
  const auto four = enumerate_choice_sequences(4, 3);
  CHECK(std::find(four.begin(), four.end(), worked_example()) != four.end());
  CHECK_THROWS_AS(enumerate_choice_sequences(3, 3), Error);
}

TEST_CASE("index sets follow the deletion rule") {
  for (const auto& F : enumerate_choice_sequences(4, 3)) {
    for (int l = 1; l <= 4; ++l) {
      const auto& I = F.index_set(l);
      CHECK(static_cast<int>(I.size()) == 4 + 2 - l);
      CHECK(std::is_sorted(I.begin(), I.end()));
      if (l <= 3) {
        const Pick p = F.picks()[static_cast<std::size_t>(l - 1)];
        CHECK(p.index != I.front());
        const auto& next = F.index_set(l + 1);
        const int removed = p.sign == Sign::Plus ? p.index : neighbours(I, p.index).first;
        CHECK(std::find(next.begin(), next.end(), removed) == next.end());
      }
    }
  }
  CHECK_THROWS_AS(ChoiceSequence(3, {{0, Sign::Plus}}), Error);
}

TEST_CASE("worked example table") {
  const ChoiceSequence F = worked_example();
  const IndexData d1 = index_data(F, 1), d2 = index_data(F, 2), d3 = index_data(F, 3), d4 = index_data(F, 4);
  CHECK(d1.index_set == std::vector<int>{0, 1, 2, 3, 4});
  CHECK((*d1.pick == 1 && *d1.lower == 0 && *d1.upper == 2));
  CHECK(d2.index_set == std::vector<int>{0, 2, 3, 4});
  CHECK((*d2.pick == 2 && *d2.lower == 0 && *d2.upper == 3));
  CHECK(d3.index_set == std::vector<int>{2, 3, 4});
  CHECK((*d3.pick == 4 && *d3.lower == 3 && *d3.upper == 2));
  CHECK(d4.index_set == std::vector<int>{2, 4});
  CHECK((*d4.pick == 4 && *d4.lower == 2));
}

TEST_CASE("xi and zeta coordinates") {
  const ChoiceSequence F = worked_example();
  const double lambda[] = {0, 1, 3, 6, 10};
  const XiZeta z = zeta_xi_eval(F, 1, lambda);
  CHECK(z.xi == 1.0);
  CHECK(*z.zeta == doctest::Approx(3.0));
  // Last level: zeta_{n-1} = xi_n / xi_{n-1}.
  const double x3 = zeta_xi_eval(F, 3, lambda).xi, x4 = zeta_xi_eval(F, 4, lambda).xi;
  CHECK(*zeta_xi_eval(F, 3, lambda).zeta == doctest::Approx(x4 / x3));
  // Plus branch with equal outer neighbours gives zeta = 0.
  const ChoiceSequence G(2, {{1, Sign::Plus}});
  const double flat[] = {1.0, 2.0, 1.0};
  CHECK(*zeta_xi_eval(G, 1, flat).zeta == 0.0);
  const double degenerate[] = {1.0, 1.0, 2.0};
  CHECK_THROWS_AS(zeta_xi_eval(G, 1, degenerate), Error);
}

TEST_CASE("difference basis reconstructs consecutive differences") {
  CounterRng rng(5);
  for (const auto& F : enumerate_choice_sequences(4, 3)) {
    std::vector<double> lambda(5);
    for (double& v : lambda) v = rng.uniform(-1.0, 1.0);
    std::vector<double> xi;
    for (int l = 1; l <= 4; ++l) xi.push_back(zeta_xi_eval(F, l, lambda).xi);
    for (int k = 1; k <= 4; ++k) {
      const DifferenceBasis b = difference_basis(F, k);
      const auto& I = F.index_set(k);
      for (std::size_t a = 1; a < I.size(); ++a) {
        double acc = 0.0;
        for (std::size_t j = 0; j < b.T[a - 1].size(); ++j) acc += static_cast<double>(b.T[a - 1][j]) * xi[static_cast<std::size_t>(k - 1) + j];
        CHECK(std::abs(acc - (lambda[static_cast<std::size_t>(I[a])] - lambda[static_cast<std::size_t>(I[a - 1])])) < 1e-12);
      }
      // The pivot row is the leading unit vector.
      const auto& pivot = b.T[static_cast<std::size_t>(b.pivot_row)];
      CHECK(pivot[0] == 1);
      for (std::size_t j = 1; j < pivot.size(); ++j) CHECK(pivot[j] == 0);
    }
    // The last numerator is +-xi_n; the sign follows the cyclic neighbour, not always +1.
    const Rational last = difference_basis(F, 1).R[2][2];
    CHECK(abs(last) == 1);
    const double sign = *zeta_xi_eval(F, 3, lambda).zeta * xi[2] / xi[3];
    CHECK(sign == doctest::Approx(static_cast<double>(last)));
  }
}

TEST_CASE("Schatten exponents") {
  const SchattenParams eq = SchattenParams::equal(3, 2.0);
  CHECK(eq.p() == doctest::Approx(2.0));
  CHECK(eq.partial(0, 1) == doctest::Approx(6.0));
  CHECK(eq.partial(1, 3) == doctest::Approx(3.0));
  const SchattenParams endpoint{{1.0, 4.0}}, empty{};
  CHECK_THROWS_AS(endpoint.validate(), Error);
  CHECK_THROWS_AS(empty.validate(), Error);
  CHECK(conjugate_exponent(4.0) == doctest::Approx(4.0 / 3.0));
  CHECK(sharp(1.25) == doctest::Approx(5.0));
}

TEST_CASE("theoretical bound") {
  // n = 2, p_1 = p_2 = 4 by hand: the four sequences pick (lower, pick) pairs.
  const SchattenParams params{{4.0, 4.0}};
  double hand = 0.0;
  for (const auto& F : enumerate_choice_sequences(2, 1)) {
    const IndexData a = index_data(F, 1), b = index_data(F, 2);
    hand += sharp(params.partial(*a.lower, *a.pick)) * sharp(params.partial(*b.lower, *b.pick));
  }
  CHECK(theoretical_bound(params) == doctest::Approx(hand));
  // For p >= 2 every partial exponent is >= 2, so the n = 2 bound is exactly c p^2.
  const double c = theoretical_bound(SchattenParams::equal(2, 2.0)) / 4.0;
  for (double p : {4.0, 16.0, 64.0}) CHECK(theoretical_bound(SchattenParams::equal(2, p)) == doctest::Approx(c * p * p));
  for (int n = 2; n <= 3; ++n) {
    double lo = INFINITY, hi = 0.0;
    for (double p : {1.01, 1.1, 2.0, 8.0, 32.0, 64.0}) {
      const double r = theoretical_bound(SchattenParams::equal(n, p)) / (conjugate_exponent(p) * std::pow(p, n));
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CHECK(hi / lo < 10.0);
  }
}

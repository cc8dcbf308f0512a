#include "doctest.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "schurlab/errors.hpp"
#include "schurlab/partition.hpp"
#include "schurlab/rng.hpp"

using namespace schurlab;

TEST_CASE("smooth cutoff") {
  CHECK(smooth_cutoff(0.0) == 1.0);
  CHECK(smooth_cutoff(0.75) == 1.0);
  CHECK(smooth_cutoff(1.0) == 0.0);
  CHECK(smooth_cutoff(0.875) == doctest::Approx(0.5));
  double prev = 1.0;
  for (double x = 0.75; x <= 1.0; x += 0.01) {
    CHECK(smooth_cutoff(x) <= prev);
    prev = smooth_cutoff(x);
  }
}

TEST_CASE("smooth max sits between max and k^{1/64} max") {
  const double x[] = {0.3, -2.0, 1.9};
  CHECK(smooth_max_abs(x) >= 2.0);
  CHECK(smooth_max_abs(x) <= 2.0 * std::pow(3.0, 1.0 / 64.0));
}

TEST_CASE("standard basis vectors live in one chart") {
  for (int k = 1; k <= 5; ++k) {
    const SpherePartition part(k);
    for (int l = 0; l < k; ++l) {
      std::vector<double> e(static_cast<std::size_t>(k), 0.0);
      e[static_cast<std::size_t>(l)] = 1.0;
      for (int m = 0; m < k; ++m) CHECK(part.eval(m, e) == (m == l ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("symmetric point lies in every chart") {
  const SpherePartition part(4);
  const double x[] = {1.0, -1.0, 1.0, 1.0};
  const auto w = part.eval_all(x);
  CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0));
  for (double v : w) CHECK((v > 0.0 && v < 1.0));
}

TEST_CASE("partition properties on random points") {
  CounterRng rng(17);
  for (int s = 0; s < 1000; ++s) {
    const int k = 2 + static_cast<int>(rng.next_u64() % 4);
    std::vector<double> x(static_cast<std::size_t>(k));
    for (double& v : x) v = rng.normal();
    const SpherePartition part(k);
    const auto w = part.eval_all(x);
    CHECK(std::abs(std::accumulate(w.begin(), w.end(), 0.0) - 1.0) <= 1e-12);
    std::vector<double> y = x, z = x;
    for (double& v : y) v *= 7.3;
    for (double& v : z) v = -v;
    const auto wy = part.eval_all(y), wz = part.eval_all(z);
    for (int l = 0; l < k; ++l) {
      const auto L = static_cast<std::size_t>(l);
      if (!part.in_chart(l, x)) CHECK(w[L] == 0.0);
      CHECK(std::abs(wy[L] - w[L]) <= 1e-14);  // rescaling rounds x, the cutoff slope amplifies it
      CHECK(wz[L] == w[L]);
    }
  }
  const double zero[] = {0.0, 0.0};
  CHECK_THROWS_AS(SpherePartition(2).eval_all(zero), Error);
}

TEST_CASE("theta on index sets") {
  const std::vector<int> I{0, 1, 2};
  const double dominant[] = {0.0, 1.0, 1.0005};
  CHECK(theta_eval(I, 1, dominant) == doctest::Approx(1.0));
  CHECK(theta_eval(I, 2, dominant) == 0.0);
  CHECK(chart_membership(I, 1, dominant));
  CHECK_FALSE(chart_membership(I, 2, dominant));
  CHECK_THROWS_AS(theta_eval(I, 0, dominant), Error);
  const double flat[] = {2.0, 2.0, 2.0};
  CHECK_THROWS_AS(theta_eval(I, 1, flat), Error);

  CounterRng rng(23);
  const std::vector<int> J{0, 2, 3, 5};
  for (int s = 0; s < 1000; ++s) {
    std::vector<double> lambda(6);
    for (double& v : lambda) v = rng.uniform(-3.0, 3.0);
    double sum = 0.0;
    for (std::size_t a = 1; a < J.size(); ++a) sum += theta_eval(J, J[a], lambda);
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    std::vector<double> shifted = lambda;
    const double c = rng.uniform(-1.0, 1.0);
    for (double& v : shifted) v += c;
    CHECK(std::abs(theta_eval(J, 3, shifted) - theta_eval(J, 3, lambda)) <= 1e-9);
  }
}

#include "doctest.h"

#include <cmath>
#include <vector>

#include "schurlab/errors.hpp"
#include "schurlab/homfourier.hpp"
#include "schurlab/rng.hpp"
#include "schurlab/verify.hpp"

using namespace schurlab;

namespace {

std::vector<double> random_point(int n, CounterRng& rng) {
  std::vector<double> xi(static_cast<std::size_t>(n));
  for (double& v : xi) v = rng.uniform(-1.0, 1.0);
  return xi;
}

}  // namespace

TEST_CASE("bump symbols are homogeneous and respect their support") {
  CounterRng rng(1);
  for (int n = 2; n <= 3; ++n) {
    for (int variant = 0; variant <= 1; ++variant) {
      const HomogeneousSymbol phi = partition_bump_symbol(n, variant);
      for (int s = 0; s < 200; ++s) {
        auto xi = random_point(n, rng);
        const Complex v = phi.eval(xi);
        auto scaled = xi;
        for (double& x : scaled) x *= 4.2;
        CHECK(std::abs(phi.eval(scaled) - v) <= 1e-14);
        for (int k = 0; k + 1 < n; ++k) {
          if (std::abs(xi[static_cast<std::size_t>(k) + 1]) > std::abs(xi[static_cast<std::size_t>(k)]) / 0.5) CHECK(v == Complex(0.0));
        }
        xi.back() = 0.0;
        CHECK(phi.eval(xi) == Complex(0.0));
      }
    }
  }
}

TEST_CASE("compression to psi") {
  const HomogeneousSymbol phi = partition_bump_symbol(3, 1);
  const auto psi = compress_to_psi(phi, 2000, 4);
  CounterRng rng(2);
  for (int s = 0; s < 1000; ++s) {
    const auto xi = random_point(3, rng);
    const double ratios[] = {xi[1] / xi[0], xi[2] / xi[1]};
    CHECK(std::abs(psi(ratios) - phi.eval(xi)) <= 1e-12);
  }
  const double outside[] = {2.5, 1.0};
  CHECK(psi(outside) == Complex(0.0));

  HomogeneousSymbol wide;
  wide.n = 2;
  wide.margins = {0.5};
  wide.eval = [](std::span<const double> xi) { return Complex(xi[1] == 0.0 ? 0.0 : 1.0, 0.0); };
  try {
    compress_to_psi(wide, 2000, 0);
    FAIL("expected SupportViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SupportViolation);
  }
}

TEST_CASE("parity components") {
  const HomogeneousSymbol odd = partition_bump_symbol(2, 1);
  CounterRng rng(3);
  for (int s = 0; s < 100; ++s) {
    const auto xi = random_point(2, rng);
    Complex sum = 0.0;
    for (unsigned eps = 0; eps < 4; ++eps) sum += parity_component(odd, eps, xi);
    CHECK(std::abs(sum - odd.eval(xi)) <= 1e-14);
    // xi_2 / xi_1 times an even weight: only the fully odd pattern survives.
    CHECK(std::abs(parity_component(odd, 0, xi)) <= 1e-15);
    CHECK(std::abs(parity_component(odd, 1, xi)) <= 1e-15);
    CHECK(std::abs(parity_component(odd, 2, xi)) <= 1e-15);
  }
}

TEST_CASE("Fourier weights reconstruct the symbol") {
  const HomogeneousSymbol phi = partition_bump_symbol(2, 1);
  const FourierWeights w = fourier_weights(phi, 2048);
  CHECK(w.points == 2048);
  CHECK(w.h == doctest::Approx((w.K + w.L) / 2048.0));
  CounterRng rng(5);
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    auto xi = random_point(2, rng);
    const Complex r = reconstruct(w, xi);
    worst = std::max(worst, std::abs(r - phi.eval(xi)));
    auto scaled = xi;
    for (double& x : scaled) x *= 3.0;
    CHECK(std::abs(reconstruct(w, scaled) - r) <= 1e-10);
    auto flipped = xi;
    flipped[0] = -flipped[0];
    CHECK(std::abs(reconstruct(w, flipped) + r) <= 1e-10);  // only the odd-odd component is present
  }
  CHECK(worst <= 1e-3);
  const FourierWeights fine = fourier_weights(phi, default_points(2));
  const double chart_centre[] = {1.0, 1.0};
  CHECK(std::abs(reconstruct(fine, chart_centre) - phi.eval(chart_centre)) <= 1e-3);

  // Doubling L at the default h leaves the reconstruction unchanged.
  const FourierWeights wide = fourier_weights_step(phi, fine.h, 2.0 * kDefaultHalfWidth);
  for (int s = 0; s < 20; ++s) {
    const auto xi = random_point(2, rng);
    CHECK(std::abs(reconstruct(wide, xi) - reconstruct(fine, xi)) <= 1e-6);
  }

  const double zero[] = {1.0, 0.0};
  CHECK_THROWS_AS(reconstruct(w, zero), Error);
  const double three[] = {1.0, 0.5, 0.2};
  CHECK_THROWS_AS(reconstruct(w, three), Error);
  CHECK_THROWS_AS(fourier_weights(phi, 256, 0.3), Error);

  const auto j = weights_to_json(w);
  CHECK(j["points"] == 2048);
  CHECK(j.contains("h"));
}

TEST_CASE("HMS seminorm") {
  CHECK(hms_seminorm([](double, double) { return Complex(-2.5, 0.0); }) == doctest::Approx(2.5));
  for (double s : {-16.0, -4.0, -1.0, 1.0, 4.0, 16.0}) {
    const double v = hms_seminorm([s](double l, double m) { return std::pow(Complex(std::abs(l - m), 0.0), Complex(0.0, s)); });
    CHECK(v / std::abs(s) <= 3.0);
    CHECK(v / std::abs(s) >= 1.0);
  }
}

#include "doctest.h"

#include <cmath>
#include <vector>

#include "schurlab/errors.hpp"
#include "schurlab/rng.hpp"
#include "schurlab/schatten.hpp"

using namespace schurlab;

namespace {

DenseMatrix random_matrix(int rows, int cols, CounterRng& rng) {
  DenseMatrix x(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) x(i, j) = rng.complex_normal();
  }
  return x;
}

std::vector<long> range(int N) {
  std::vector<long> F(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) F[static_cast<std::size_t>(i)] = i;
  return F;
}

Complex pairing(const DenseMatrix& a, const DenseMatrix& b) { return (a.array() * b.conjugate().array()).sum(); }

const double kExponents[] = {1.0, 1.5, 2.0, 4.0, INFINITY};

}  // namespace

TEST_CASE("Schatten norms of simple matrices") {
  DenseMatrix d = DenseMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 4.0;
  CHECK(schatten_norm(d, 1.0) == doctest::Approx(7.0));
  CHECK(schatten_norm(d, 2.0) == doctest::Approx(5.0));
  CHECK(schatten_norm(d, INFINITY) == doctest::Approx(4.0));
  CounterRng rng(1);
  const Eigen::HouseholderQR<DenseMatrix> qr(random_matrix(6, 6, rng));
  const DenseMatrix U = qr.householderQ();
  CHECK(schatten_norm(U, INFINITY) == doctest::Approx(1.0));
  CHECK(schatten_norm(U, 2.0) == doctest::Approx(std::sqrt(6.0)));
  const DenseMatrix u = random_matrix(5, 1, rng), v = random_matrix(5, 1, rng);
  for (double p : kExponents) CHECK(schatten_norm(u * v.adjoint(), p) == doctest::Approx(u.norm() * v.norm()));
  CHECK_THROWS_AS(schatten_norm(d, 0.5), Error);
}

TEST_CASE("dual elements norm their argument") {
  CounterRng rng(2);
  for (double p : kExponents) {
    const DenseMatrix x = random_matrix(5, 5, rng);
    const DenseMatrix g = dual_element(x, p);
    const double q = p == 1.0 ? INFINITY : (std::isinf(p) ? 1.0 : p / (p - 1.0));
    CHECK(pairing(x, g).real() == doctest::Approx(schatten_norm(x, p)).epsilon(1e-10));
    CHECK(schatten_norm(g, q) == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(dual_element(DenseMatrix::Zero(3, 3), 2.0).norm() == 0.0);
}

TEST_CASE("truncations") {
  DenseMatrix x(2, 2);
  x << 1.0, 2.0, 3.0, 4.0;
  const DenseMatrix up = truncate(x, Truncation::Upper);
  CHECK(up(0, 1) == Complex(2.0));
  CHECK(up(0, 0) == Complex(0.0));
  CHECK(up(1, 0) == Complex(0.0));
  CounterRng rng(3);
  for (int s = 0; s < 100; ++s) {
    const DenseMatrix y = random_matrix(6, 6, rng);
    CHECK((truncate(y, Truncation::Upper) + truncate(y, Truncation::Lower) + truncate(y, Truncation::Diagonal) - y).norm() == 0.0);
    for (double p : kExponents) CHECK(schatten_norm(truncate(y, Truncation::Diagonal), p) <= schatten_norm(y, p) * (1.0 + 1e-12));
  }
}

TEST_CASE("Schur multiplication") {
  CounterRng rng(4);
  const int N = 5;
  const DenseMatrix a = random_matrix(N, N, rng), b = random_matrix(N, N, rng), c = random_matrix(N, N, rng);
  const DiscreteSymbol diag = truncation_symbol(Truncation::Diagonal, range(N));
  CHECK((schur_multiply(diag, {a}) - truncate(a, Truncation::Diagonal)).norm() < 1e-14);
  const DiscreteSymbol one2 = DiscreteSymbol::constant(2, range(N), 1.0);
  CHECK((schur_multiply(one2, {a, b}) - a * b).norm() < 1e-12);
  const DiscreteSymbol one3 = DiscreteSymbol::tabulate(3, range(N), [](std::span<const std::size_t>) { return Complex(1.0); });
  CHECK((schur_multiply(one3, {a, b, c}) - a * b * c).norm() < 1e-11);

  // Linear multipliers on S_2 act entrywise.
  const DiscreteSymbol phi = DiscreteSymbol::tabulate(1, range(N), [](std::span<const std::size_t> s) {
    return Complex(std::cos(1.0 + s[0] * 0.7 - s[1] * 1.3), 0.0);
  });
  DenseMatrix unit = DenseMatrix::Zero(N, N);
  unit(2, 4) = 1.0;
  CHECK(schatten_norm(schur_multiply(phi, {unit}), 2.0) == doctest::Approx(std::abs(phi(std::vector<std::size_t>{2, 4}))));

  // Hoelder: Mult is contractive S_{p1} x S_{p2} -> S_p with 1/p = 1/p1 + 1/p2.
  for (int s = 0; s < 50; ++s) {
    const DenseMatrix x = random_matrix(N, N, rng), y = random_matrix(N, N, rng);
    CHECK(schatten_norm(x * y, 2.0) <= schatten_norm(x, 4.0) * schatten_norm(y, 4.0) * (1.0 + 1e-12));
  }
  CHECK_THROWS_AS(schur_multiply(one2, {a}), Error);
}

TEST_CASE("slot adjoints") {
  CounterRng rng(5);
  const int N = 4;
  const DiscreteSymbol phi = DiscreteSymbol::tabulate(2, range(N), [](std::span<const std::size_t> s) {
    return Complex(std::sin(1.0 + s[0] - 2.0 * s[1] + 0.5 * s[2]), std::cos(0.3 * s[0] * s[2]));
  });
  std::vector<DenseMatrix> xs{random_matrix(N, N, rng), random_matrix(N, N, rng)};
  const DenseMatrix g = random_matrix(N, N, rng);
  for (std::size_t slot = 0; slot < 2; ++slot) {
    const DenseMatrix y = random_matrix(N, N, rng);
    auto ys = xs;
    ys[slot] = y;
    CHECK(std::abs(pairing(schur_multiply(phi, ys), g) - pairing(y, slot_adjoint(phi, xs, slot, g))) < 1e-10);
  }
}

TEST_CASE("sampled and lattice symbols") {
  const std::vector<double> grid{-0.9, -0.2, 0.4, 1.1};
  const DiscreteSymbol mono = sampled_symbol(make_monomial(2), grid, 2);
  for (const Complex& v : mono.values()) CHECK(std::abs(v - 1.0) < 1e-12);
  const DiscreteSymbol abs_pos = sampled_symbol(make_abs_power(3), {0.1, 0.5, 2.0}, 3, DivDiffScale::SimplexAverage);
  for (const Complex& v : abs_pos.values()) CHECK(std::abs(v - 6.0) < 1e-12);
  const DiscreteSymbol a2 = sampled_symbol(make_abs_power(2), grid, 2);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      for (std::size_t k = 0; k < 4; ++k) {
        const std::size_t s[] = {i, j, k}, t[] = {k, i, j};
        CHECK(std::abs(a2(s) - a2(t)) < 1e-12);
      }
    }
  }
  const DiscreteSymbol lat = lattice_symbol(1, 0.5, 40, 80, 2, {0, 1, 2, 3});
  const std::size_t up[] = {0, 2, 1}, down[] = {1, 3, 0}, same[] = {1, 2, 1};
  CHECK(lat(up).real() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(lat(down).real() == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(std::abs(lat(same)) < 1e-6);
  const DiscreteSymbol lat2 = lattice_symbol(2, 0.5, 40, 80, 3, {0, 1, 2, 3});
  const std::size_t valley[] = {2, 0, 1, 3};
  CHECK(lat2(valley).real() == doctest::Approx(-6.0).epsilon(1e-6));
}

TEST_CASE("json round trips") {
  CounterRng rng(6);
  const DenseMatrix x = random_matrix(3, 2, rng);
  CHECK((matrix_from_json(matrix_to_json(x)) - x).norm() == 0.0);
  const DiscreteSymbol phi = sampled_symbol(make_exp(), {0.0, 1.0, 2.5}, 1);
  const DiscreteSymbol back = symbol_from_json(symbol_to_json(phi));
  CHECK(back.values() == phi.values());
  CHECK(back.index_set() == phi.index_set());
}

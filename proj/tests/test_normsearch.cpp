#include "doctest.h"

#include <cmath>
#include <sstream>
#include <vector>

#include "schurlab/errors.hpp"
#include "schurlab/normsearch.hpp"
#include "schurlab/rng.hpp"

using namespace schurlab;

namespace {

std::vector<long> range(int N) {
  std::vector<long> F(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) F[static_cast<std::size_t>(i)] = i;
  return F;
}

NormSearchOptions quick(std::uint64_t seed, int restarts = 4, int iters = 60) {
  NormSearchOptions o;
  o.seed = seed;
  o.restarts = restarts;
  o.iters = iters;
  return o;
}

}  // namespace

TEST_CASE("linear S_2 multipliers reach the sup norm") {
  const DiscreteSymbol phi = DiscreteSymbol::tabulate(1, range(6), [](std::span<const std::size_t> s) {
    return Complex(std::sin(1.0 + 2.0 * s[0] + 0.3 * s[1] * s[1]), 0.0);
  });
  const NormEstimate e = estimate_norm(phi, SchattenParams{{2.0}}, quick(1));
  CHECK(e.value == doctest::Approx(phi.sup_norm()).epsilon(1e-6));
  CHECK(estimate_norm(truncation_symbol(Truncation::Upper, range(6)), SchattenParams{{2.0}}, quick(2)).value ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Hoelder equality for the product map") {
  const NormEstimate e = estimate_norm(DiscreteSymbol::constant(2, range(5), 1.0), SchattenParams{{4.0, 4.0}}, quick(3));
  CHECK(std::abs(e.value - 1.0) <= 1e-3);
}

TEST_CASE("estimates are certified by their witnesses") {
  const DiscreteSymbol phi = sampled_symbol(make_abs_power(2), {-0.75, -0.25, 0.25, 0.75}, 2, DivDiffScale::SimplexAverage);
  const SchattenParams params = SchattenParams::equal(2, 3.0);
  const NormEstimate e = estimate_norm(phi, params, quick(4));
  CHECK(e.value == doctest::Approx(evaluate_witnesses(phi, params, e.witnesses)).epsilon(1e-9));
  for (std::size_t i = 0; i < e.witnesses.size(); ++i) CHECK(schatten_norm(e.witnesses[i], params.p_list[i]) == doctest::Approx(1.0));
  for (std::size_t t = 1; t < e.trace.size(); ++t) CHECK(e.trace[t] >= e.trace[t - 1] * (1.0 - 1e-12));
  CHECK(e.value <= e.envelope * (1.0 + 1e-9));
  CHECK(e.value == doctest::Approx(*std::max_element(e.restart_values.begin(), e.restart_values.end())));
  CHECK(e.restarts == static_cast<int>(e.restart_values.size()));
  CHECK(e.envelope == doctest::Approx(crude_envelope(phi, params)));

  const NormEstimate again = estimate_norm(phi, params, quick(4));
  CHECK(again.value == e.value);
  CHECK(again.restart_values == e.restart_values);
}

TEST_CASE("endpoint exponents are allowed and flagged") {
  const DiscreteSymbol phi = truncation_symbol(Truncation::Diagonal, range(4));
  const NormEstimate e = estimate_norm(phi, SchattenParams{{1.0}}, quick(5));
  CHECK(e.endpoint_exponent);
  CHECK(e.value <= 1.0 + 1e-12);
  CHECK_THROWS_AS(estimate_norm(phi, SchattenParams{{0.5}}, quick(5)), Error);
}

TEST_CASE("zero padding never lowers the estimate") {
  const int small = 4, large = 8;
  const NormEstimate e = estimate_norm(truncation_symbol(Truncation::Upper, range(small)), SchattenParams{{4.0}}, quick(6));
  DenseMatrix padded = DenseMatrix::Zero(large, large);
  padded.topLeftCorner(small, small) = e.witnesses[0];
  const DiscreteSymbol big = truncation_symbol(Truncation::Upper, range(large));
  CHECK(evaluate_witnesses(big, SchattenParams{{4.0}}, {padded}) == doctest::Approx(e.value));
  NormSearchOptions o = quick(6);
  o.start = {padded};
  CHECK(estimate_norm(big, SchattenParams{{4.0}}, o).value >= e.value * (1.0 - 1e-12));
}

TEST_CASE("Volterra witness") {
  const DenseMatrix v2 = volterra_witness(2);
  CHECK(v2(0, 0) == Complex(1.0));
  CHECK(v2(0, 1) == Complex(0.0));
  CHECK(v2(1, 0) == Complex(1.0));
  CHECK(v2(1, 1) == Complex(1.0));
  double prev = 0.0;
  for (int N : {8, 16, 32, 64}) {
    const DenseMatrix w = volterra_witness(N).transpose();
    const double ratio = schatten_norm(truncate(w, Truncation::Upper), 4.0) / schatten_norm(w, 4.0);
    CHECK(ratio > prev);
    prev = ratio;
  }
}

TEST_CASE("lattice constructions converge away from the degenerate middle index") {
  const std::vector<long> F{1, 2, 3};
  const double first = convergence_check(Construction::First, 2, 0.5, 20, 200, F, 9);
  const double second = convergence_check(Construction::Second, 3, 0.5, 20, 200, F, 9);
  CHECK(first <= 1e-4);
  CHECK(second <= 1e-4);
  const double coarse = convergence_check(Construction::First, 2, 0.5, 10, 20, F, 9);
  const double finer = convergence_check(Construction::First, 2, 0.5, 10, 40, F, 9);
  CHECK(finer <= coarse + 1e-9);
}

TEST_CASE("power-law fits") {
  const std::vector<double> p{2, 4, 8, 16};
  std::vector<double> v;
  for (double x : p) v.push_back(3.0 * x * x);
  const ExponentFit fit = fit_exponent(p, v);
  CHECK(fit.exponent == doctest::Approx(2.0));
  CHECK(fit.residual < 1e-12);
  CHECK(fit.claimed);
  CHECK_FALSE(fit_exponent({2.0}, {1.0}).claimed);
}

TEST_CASE("experiment specs") {
  const nlohmann::json j = {{"symbol", {{"kind", "upper"}, {"params", nlohmann::json::object()}}},
                            {"n", 1}, {"N", 6}, {"p_grid", {2.0, 4.0}}, {"restarts", 2}, {"iters", 20}, {"seed", 5}};
  const ExperimentSpec spec = experiment_from_json(j);
  CHECK(spec.N == 6);
  CHECK(experiment_to_json(spec) == j);
  nlohmann::json bad = j;
  bad["colour"] = "red";
  try {
    experiment_from_json(bad);
    FAIL("expected InvalidConfig");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidConfig);
  }
  ExperimentSpec wrong = spec;
  wrong.n = 2;
  CHECK_THROWS_AS(experiment_symbol(wrong), Error);

  const SweepResult r = sweep_and_fit(spec);
  const std::string csv = sweep_to_csv(r);
  CHECK(csv.rfind("p,estimate,envelope,restart_spread,large_p_exponent,large_p_residual,small_p_exponent,small_p_residual\r\n", 0) == 0);
  CHECK(csv == sweep_to_csv(sweep_and_fit(spec)));
  CHECK(r.estimates.size() == 2);
}

TEST_CASE("four-term identity") {
  const double ones[] = {1.0, 1.0, 1.0, 1.0};
  const RemarkTerms t = remark_identity(ones);
  CHECK(t.I == 0.0);
  CHECK(t.II == 0.0);
  CHECK(t.III == doctest::Approx(0.25));
  CHECK(t.IV == doctest::Approx(-0.25));
  CHECK(std::abs(t.lhs) < 1e-12);
  const double v[] = {0.3, 2.0, 7.5, 1.1}, w[] = {3.0, 20.0, 75.0, 11.0};
  const RemarkTerms a = remark_identity(v), b = remark_identity(w);
  CHECK(a.residual <= 1e-10);
  CHECK(a.lhs == doctest::Approx(b.lhs).epsilon(1e-12));
  CHECK(a.I == doctest::Approx(b.I));
  const double neg[] = {1.0, -1.0, 1.0, 1.0};
  try {
    remark_identity(neg);
    FAIL("expected NonpositiveInput");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonpositiveInput);
  }
}

TEST_CASE("estimate serialisation") {
  const NormEstimate e = estimate_norm(truncation_symbol(Truncation::Upper, range(3)), SchattenParams{{2.0}}, quick(7));
  const auto j = estimate_to_json(e);
  CHECK(j["kind"] == "lower_bound");
  CHECK(j["witnesses"].size() == 1);
  CHECK(j["value"].get<double>() == e.value);
}

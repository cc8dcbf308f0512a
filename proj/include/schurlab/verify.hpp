#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "schurlab/homfourier.hpp"

namespace schurlab {

/// One measured quantity against its tolerance; details carry grid/sample metadata.
struct CheckReport {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  nlohmann::json details = nlohmann::json::object();
};

nlohmann::json report_to_json(const CheckReport& r);

/// Insertion, multiplicity, algebraic and zero-insertion reductions on random configurations for
/// every n in [n_min, n_max] and f in {x^0..x^8, exp, sin}. One report per identity.
std::vector<CheckReport> verify_reductions(int n_min, int n_max, int trials, std::uint64_t seed, double tol = 1e-8);

/// Block-permutation invariance, confluent limits and simplex-oracle agreement.
std::vector<CheckReport> verify_divdiff(int trials, long oracle_samples, std::uint64_t seed, double tol = 1e-9);

/// Core and final decompositions for one n in {2, 3}: residuals, monomial positivity and
/// terminal-coordinate structure.
std::vector<CheckReport> verify_decomposition(int n, int trials, std::uint64_t seed, double tol = 1e-7);

/// Partition of unity, support, homogeneity and translation invariance.
std::vector<CheckReport> verify_partition(int samples, std::uint64_t seed, double tol = 1e-12);

/// Homogeneous symbol made of two-chart partition weights on consecutive coordinate pairs.
/// Variant 0 is even, variant 1 carries the factor xi_n / xi_1.
HomogeneousSymbol partition_bump_symbol(int n, int variant);

/// Reconstruction error at random points for the bump symbols of dimension n, at the default
/// grid and at half resolution.
std::vector<CheckReport> verify_fourier(int n, int points, std::uint64_t seed, double tol = 1e-3);

/// Four-term identity for a_3 at random positive quadruples in [0.1, 10].
CheckReport verify_remark(int trials, std::uint64_t seed, double tol = 1e-9);

/// Exact orthant values, the worked choice-sequence table and the lattice limits.
std::vector<CheckReport> verify_exact_values(std::uint64_t seed);

}  // namespace schurlab

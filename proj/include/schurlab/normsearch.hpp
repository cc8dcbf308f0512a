#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "schurlab/combinatorics.hpp"
#include "schurlab/schatten.hpp"

namespace schurlab {

struct NormSearchOptions {
  int restarts = 16;
  int iters = 200;  // slot sweeps per restart
  std::uint64_t seed = 0;
  double rel_tol = 1e-12;  // stop a restart once a sweep gains less than this
  std::vector<DenseMatrix> start;  // optional extra start, normalized before use
};

/// Lower bound for ||T_phi : S_{p_1} x ... x S_{p_n} -> S_p|| with the tuple attaining it.
struct NormEstimate {
  double value = 0.0;
  std::vector<DenseMatrix> witnesses;  // unit vectors in their S_{p_i}
  int restarts = 0;
  std::vector<double> restart_values;
  std::vector<double> trace;  // per-sweep values of the winning restart, nondecreasing
  SchattenParams params;
  std::uint64_t seed = 0;
  double envelope = 0.0;  // ||phi||_inf N^{max(0,1/p-1/2)} prod N^{max(0,1/2-1/p_i)}
  bool endpoint_exponent = false;  // some exponent is 1 or inf
};

/// Block-coordinate ascent. Start 0 is the matrix-unit chain at argmax |phi|, then the optional
/// user start, then independent complex Gaussian starts; restarts run in parallel.
NormEstimate estimate_norm(const DiscreteSymbol& phi, const SchattenParams& params, const NormSearchOptions& opts = {});

/// ||T_phi(witnesses)||_p / prod ||witness_i||_{p_i}.
double evaluate_witnesses(const DiscreteSymbol& phi, const SchattenParams& params, const std::vector<DenseMatrix>& xs);

double crude_envelope(const DiscreteSymbol& phi, const SchattenParams& params);

/// Lower-triangular all-ones pattern including the diagonal.
DenseMatrix volterra_witness(int N);

enum class Construction { First, Second };

/// Residual in S_p between the lattice-symbol multiplier at (k, l) and its limit operator, on
/// random unit x_i in S_{np} drawn from seed.
double convergence_check(Construction c, int n, double q, int k, int l, const std::vector<long>& F,
                         std::uint64_t seed, double p = 2.0);

struct ExponentFit {
  double exponent = 0.0;
  double residual = 0.0;  // RMS of the log-log fit residuals
  int points = 0;
  bool claimed = false;  // residual < 0.05 with at least two points
};

/// Least-squares slope of log(values) against log(abscissa).
ExponentFit fit_exponent(const std::vector<double>& abscissa, const std::vector<double>& values);

struct ExperimentSpec {
  std::string kind = "upper";  // upper | lower | diagonal | mult | abs_power | lattice
  nlohmann::json symbol_params = nlohmann::json::object();
  int n = 1;
  int N = 16;
  std::vector<double> p_grid{2.0, 4.0};
  int restarts = 16;
  int iters = 200;
  std::uint64_t seed = 0;
};

ExperimentSpec experiment_from_json(const nlohmann::json& j);  // unknown keys -> InvalidConfig
nlohmann::json experiment_to_json(const ExperimentSpec& spec);
DiscreteSymbol experiment_symbol(const ExperimentSpec& spec);

struct SweepResult {
  std::vector<double> p_grid;
  std::vector<NormEstimate> estimates;
  ExponentFit large_p;  // against log p over p >= 2
  ExponentFit small_p;  // against log p* over p <= 2
};

/// p_i = n p for every grid point; grid points run in order, restarts within each in parallel.
SweepResult sweep_and_fit(const ExperimentSpec& spec);

struct RemarkTerms {
  double I = 0.0, II = 0.0, III = 0.0, IV = 0.0;
  double lhs = 0.0;
  double residual = 0.0;
};

/// Four-term decomposition of a_3^{[3]}(t_0, -t_1, t_2, -t_3); throws NonpositiveInput.
RemarkTerms remark_identity(std::span<const double> t);

nlohmann::json estimate_to_json(const NormEstimate& e);
std::string sweep_to_csv(const SweepResult& r);

}  // namespace schurlab

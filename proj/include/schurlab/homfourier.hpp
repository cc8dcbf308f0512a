#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "json.hpp"

namespace schurlab {

using Complex = std::complex<double>;

/// Degree-0 homogeneous symbol on R^n with phi = 0 whenever |xi_{k+1}| > |xi_k| / margin_k (k < n)
/// and phi(xi_1, ..., xi_{n-1}, 0) = 0.
struct HomogeneousSymbol {
  int n = 2;
  std::function<Complex(std::span<const double>)> eval;
  std::vector<double> margins;  // n-1 entries in (0, 1]
};

/// psi(s) = phi(1, s_1, s_1 s_2, ..., s_1...s_{n-1}); throws SupportViolation if sampling finds
/// psi != 0 outside the box |s_k| <= 1/margin_k.
std::function<Complex(std::span<const double>)> compress_to_psi(const HomogeneousSymbol& phi,
                                                                  long samples = 2000, std::uint64_t seed = 0);

/// Parity component 2^{-n} sum_sigma (prod sigma_i^{eps_i}) phi(sigma xi); bit i of eps is eps_i.
Complex parity_component(const HomogeneousSymbol& phi, unsigned eps, std::span<const double> xi);

/// Samples of ghat_eps(t) = phi_eps(1, e^{t_1}, e^{t_1+t_2}, ...) on [-L, K)^{n-1} and their
/// discrete Fourier coefficients, one block per sign pattern eps.
struct FourierWeights {
  int n = 2;
  double h = 0.0;
  double L = 0.0;
  double K = 0.0;
  std::size_t points = 0;  // per axis
  double boundary_ratio = 0.0;
  std::vector<std::vector<Complex>> ghat;    // empty when the component vanishes or the grid exceeds 2^20 points
  std::vector<std::vector<Complex>> coeffs;  // forward DFT of ghat divided by points^{n-1}

  /// g_eps at frequency multi-index J (FFT ordering), so that ghat(t) = int g(s) e^{i s.t} ds.
  Complex g(unsigned eps, std::span<const std::size_t> J) const;
  double frequency(std::size_t j) const;
};

/// Default upper end of the log grid: ln(1 / min margin) + 2.
double default_upper_end(const HomogeneousSymbol& phi);
/// Default per-axis resolution: 2^12.
std::size_t default_points(int n);
constexpr double kDefaultHalfWidth = 20.0;

/// Grid with the given per-axis point count on [-L, K); throws GridTooCoarse when the
/// boundary samples exceed 1e-10 of the maximum.
FourierWeights fourier_weights(const HomogeneousSymbol& phi, std::size_t points, double L = kDefaultHalfWidth);
/// Same with step h; the point count is rounded up.
FourierWeights fourier_weights_step(const HomogeneousSymbol& phi, double h, double L = kDefaultHalfWidth);

/// Evaluates the sign-decomposed Fourier expansion at xi (all entries nonzero).
Complex reconstruct(const FourierWeights& w, std::span<const double> xi);

nlohmann::json weights_to_json(const FourierWeights& w);

struct HmsGrid {
  double radius = 1.0;
  int points = 41;
};

/// Sampled max(sup|phi|, sup |l - m| (|d_l phi| + |d_m phi|)) with central differences of step
/// 1e-3 |l - m|.
double hms_seminorm(const std::function<Complex(double, double)>& phi2, const HmsGrid& grid = {});

}  // namespace schurlab

#include "schurlab/homfourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "schurlab/errors.hpp"
#include "schurlab/rng.hpp"

namespace schurlab {

namespace {

constexpr double kBoundaryThreshold = 1e-10;
constexpr std::size_t kKeptSamples = std::size_t{1} << 20;

std::size_t grid_size(std::size_t points, int axes) {
  std::size_t s = 1;
  for (int a = 0; a < axes; ++a) s *= points;
  return s;
}

void check_symbol(const HomogeneousSymbol& phi) {
  if (phi.n < 2 || phi.n > 3) throw Error(ErrorCode::InvalidArgument, "homogeneous symbol: n must be 2 or 3");
  if (phi.margins.size() != static_cast<std::size_t>(phi.n - 1)) {
    throw Error(ErrorCode::InvalidArgument, "homogeneous symbol: need n-1 margins");
  }
  for (double m : phi.margins) {
    if (!(m > 0.0 && m <= 1.0)) throw Error(ErrorCode::InvalidArgument, "homogeneous symbol: margins must lie in (0, 1]");
  }
}

}  // namespace

std::function<Complex(std::span<const double>)> compress_to_psi(const HomogeneousSymbol& phi, long samples,
                                                                  std::uint64_t seed) {
  check_symbol(phi);
  auto psi = [phi](std::span<const double> s) {
    std::vector<double> xi(static_cast<std::size_t>(phi.n));
    xi[0] = 1.0;
    for (std::size_t k = 1; k < xi.size(); ++k) xi[k] = xi[k - 1] * s[k - 1];
    return phi.eval(xi);
  };
  CounterRng rng(seed);
  std::vector<double> s(static_cast<std::size_t>(phi.n - 1));
  for (long t = 0; t < samples; ++t) {
    const std::size_t axis = static_cast<std::size_t>(t) % s.size();
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double bound = 1.0 / phi.margins[k];
      s[k] = rng.uniform(-bound, bound);
    }
    const double bound = 1.0 / phi.margins[axis];
    const double outside = bound * std::exp(rng.uniform(1e-9, 3.0));
    s[axis] = rng.uniform() < 0.5 ? -outside : outside;
    if (psi(s) != Complex(0.0, 0.0)) {
      throw Error(ErrorCode::SupportViolation, "compress_to_psi: psi nonzero outside the declared box");
    }
  }
  return psi;
}

Complex parity_component(const HomogeneousSymbol& phi, unsigned eps, std::span<const double> xi) {
  const unsigned n = static_cast<unsigned>(phi.n);
  std::vector<double> flipped(xi.begin(), xi.end());
  Complex acc(0.0, 0.0);
  for (unsigned sigma = 0; sigma < (1u << n); ++sigma) {
    double sign = 1.0;
    for (unsigned i = 0; i < n; ++i) {
      const bool neg = (sigma >> i) & 1u;
      flipped[i] = neg ? -xi[i] : xi[i];
      if (neg && ((eps >> i) & 1u)) sign = -sign;
    }
    acc += sign * phi.eval(flipped);
  }
  return acc / static_cast<double>(1u << n);
}

double default_upper_end(const HomogeneousSymbol& phi) {
  check_symbol(phi);
  return std::log(1.0 / *std::min_element(phi.margins.begin(), phi.margins.end())) + 2.0;
}

std::size_t default_points(int) { return 4096; }

double FourierWeights::frequency(std::size_t j) const {
  const double jj = j < points / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(points);
  return 2.0 * std::numbers::pi * jj / (static_cast<double>(points) * h);
}

Complex FourierWeights::g(unsigned eps, std::span<const std::size_t> J) const {
  const auto& c = coeffs.at(eps);
  if (c.empty()) return {0.0, 0.0};
  std::size_t flat = 0;
  Complex phase(1.0, 0.0);
  for (std::size_t j : J) {
    flat = flat * points + j;
    // coeff = ghat-DFT / M; g = (h / 2 pi) e^{-i s t_0} DFT = (M h / 2 pi) e^{-i s t_0} coeff.
    phase *= static_cast<double>(points) * h / (2.0 * std::numbers::pi) * std::exp(Complex(0.0, frequency(j) * L));
  }
  return c[flat] * phase;
}

FourierWeights fourier_weights(const HomogeneousSymbol& phi, std::size_t points, double L) {
  check_symbol(phi);
  if (points < 8 || L <= 0.0) throw Error(ErrorCode::InvalidArgument, "fourier_weights: need >= 8 points and L > 0");
  const int axes = phi.n - 1;
  const unsigned patterns = 1u << phi.n;
  FourierWeights w;
  w.n = phi.n;
  w.L = L;
  w.K = default_upper_end(phi);
  w.points = points;
  w.h = (w.K + L) / static_cast<double>(points);
  const std::size_t total = grid_size(points, axes);
  w.ghat.assign(patterns, std::vector<Complex>(total));

  std::vector<double> xi(static_cast<std::size_t>(phi.n)), flipped(xi.size());
  std::vector<Complex> values(patterns);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    std::vector<double> t(static_cast<std::size_t>(axes));
    for (int a = axes - 1; a >= 0; --a) {
      t[static_cast<std::size_t>(a)] = -L + static_cast<double>(rem % points) * w.h;
      rem /= points;
    }
    xi[0] = 1.0;
    for (std::size_t k = 1; k < xi.size(); ++k) xi[k] = xi[k - 1] * std::exp(t[k - 1]);
    for (unsigned sigma = 0; sigma < patterns; ++sigma) {
      for (std::size_t i = 0; i < xi.size(); ++i) flipped[i] = ((sigma >> i) & 1u) ? -xi[i] : xi[i];
      values[sigma] = phi.eval(flipped);
    }
    for (unsigned eps = 0; eps < patterns; ++eps) {
      Complex acc(0.0, 0.0);
      for (unsigned sigma = 0; sigma < patterns; ++sigma) {
        acc += (std::popcount(sigma & eps) % 2 ? -1.0 : 1.0) * values[sigma];
      }
      w.ghat[eps][flat] = acc / static_cast<double>(patterns);
    }
  }

  double peak = 0.0, boundary = 0.0;
  for (unsigned eps = 0; eps < patterns; ++eps) {
    for (std::size_t flat = 0; flat < total; ++flat) {
      const double v = std::abs(w.ghat[eps][flat]);
      peak = std::max(peak, v);
      std::size_t rem = flat;
      bool edge = false;
      for (int a = 0; a < axes; ++a) {
        const std::size_t idx = rem % points;
        rem /= points;
        edge = edge || idx == 0 || idx == points - 1;
      }
      if (edge) boundary = std::max(boundary, v);
    }
  }
  w.boundary_ratio = peak > 0.0 ? boundary / peak : 0.0;
  if (w.boundary_ratio > kBoundaryThreshold) {
    throw Error(ErrorCode::GridTooCoarse, "fourier_weights: boundary samples at " + std::to_string(w.boundary_ratio) +
                                              " of the peak; enlarge L");
  }

  w.coeffs.assign(patterns, {});
  const bool keep_samples = total <= kKeptSamples;
  std::vector<int> dims(static_cast<std::size_t>(axes), static_cast<int>(points));
  for (unsigned eps = 0; eps < patterns; ++eps) {
    const bool vanishes = std::all_of(w.ghat[eps].begin(), w.ghat[eps].end(),
                                      [](const Complex& v) { return v == Complex(0.0, 0.0); });
    if (vanishes) {
      w.ghat[eps].clear();
      continue;
    }
    std::vector<Complex> buf = keep_samples ? w.ghat[eps] : std::move(w.ghat[eps]);
    if (!keep_samples) w.ghat[eps] = {};
    auto* data = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan plan = fftw_plan_dft(axes, dims.data(), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    for (Complex& v : buf) v /= static_cast<double>(total);
    w.coeffs[eps] = std::move(buf);
  }
  return w;
}

FourierWeights fourier_weights_step(const HomogeneousSymbol& phi, double h, double L) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "fourier_weights: step must be positive");
  const double span = default_upper_end(phi) + L;
  return fourier_weights(phi, static_cast<std::size_t>(std::ceil(span / h)), L);
}

Complex reconstruct(const FourierWeights& w, std::span<const double> xi) {
  if (xi.size() != static_cast<std::size_t>(w.n)) throw Error(ErrorCode::DimensionMismatch, "reconstruct: wrong dimension");
  for (double v : xi) {
    if (v == 0.0) throw Error(ErrorCode::ZeroCoordinate, "reconstruct: coordinates must be nonzero");
  }
  const int axes = w.n - 1;
  const std::size_t M = w.points;
  // Trigonometric interpolation basis per axis, Nyquist mode split symmetrically.
  std::vector<std::vector<Complex>> basis(static_cast<std::size_t>(axes), std::vector<Complex>(M));
  for (int a = 0; a < axes; ++a) {
    const double t = std::log(std::abs(xi[static_cast<std::size_t>(a) + 1] / xi[static_cast<std::size_t>(a)]));
    const double u = (t + w.L) / w.h;  // grid coordinate
    for (std::size_t j = 0; j < M; ++j) {
      if (M % 2 == 0 && j == M / 2) {
        basis[static_cast<std::size_t>(a)][j] = std::cos(std::numbers::pi * u);
      } else {
        basis[static_cast<std::size_t>(a)][j] = std::exp(Complex(0.0, w.frequency(j) * w.h * u));
      }
    }
  }
  Complex total(0.0, 0.0);
  for (unsigned eps = 0; eps < w.coeffs.size(); ++eps) {
    const auto& c = w.coeffs[eps];
    if (c.empty()) continue;
    Complex value(0.0, 0.0);
    if (axes == 1) {
      for (std::size_t j = 0; j < M; ++j) value += c[j] * basis[0][j];
    } else {
      for (std::size_t j1 = 0; j1 < M; ++j1) {
        Complex inner(0.0, 0.0);
        const Complex* row = c.data() + j1 * M;
        for (std::size_t j2 = 0; j2 < M; ++j2) inner += row[j2] * basis[1][j2];
        value += basis[0][j1] * inner;
      }
    }
    double sign = 1.0;
    for (int i = 0; i < w.n; ++i) {
      if (((eps >> i) & 1u) && xi[static_cast<std::size_t>(i)] < 0.0) sign = -sign;
    }
    total += sign * value;
  }
  return total;
}

nlohmann::json weights_to_json(const FourierWeights& w) {
  nlohmann::json components = nlohmann::json::array();
  for (unsigned eps = 0; eps < w.coeffs.size(); ++eps) {
    std::vector<double> re, im;
    for (const Complex& v : w.coeffs[eps]) {
      re.push_back(v.real());
      im.push_back(v.imag());
    }
    components.push_back({{"eps", eps}, {"coeff_re", re}, {"coeff_im", im}});
  }
  return {{"n", w.n},        {"h", w.h},         {"L", w.L},
          {"K", w.K},        {"points", w.points}, {"boundary_ratio", w.boundary_ratio},
          {"components", components}};
}

double hms_seminorm(const std::function<Complex(double, double)>& phi2, const HmsGrid& grid) {
  if (grid.points < 2 || !(grid.radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "hms_seminorm: bad grid");
  double best = 0.0;
  const double step = 2.0 * grid.radius / static_cast<double>(grid.points - 1);
  // Offset keeps the grid off 0 and off exact coincidences.
  for (int a = 0; a < grid.points; ++a) {
    const double lam = -grid.radius + step * (a + 0.3183);
    for (int b = 0; b < grid.points; ++b) {
      const double mu = -grid.radius + step * (b + 0.5772);
      const double gap = std::abs(lam - mu);
      if (gap < 1e-9 * grid.radius) continue;
      const double d = 1e-3 * gap;
      const double dl = std::abs(phi2(lam + d, mu) - phi2(lam - d, mu)) / (2.0 * d);
      const double dm = std::abs(phi2(lam, mu + d) - phi2(lam, mu - d)) / (2.0 * d);
      best = std::max({best, std::abs(phi2(lam, mu)), gap * (dl + dm)});
    }
  }
  return best;
}

}  // namespace schurlab

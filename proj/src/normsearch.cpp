#include "schurlab/normsearch.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "schurlab/errors.hpp"
#include "schurlab/parallel.hpp"
#include "schurlab/rng.hpp"

namespace schurlab {

namespace {

DenseMatrix normalized(const DenseMatrix& x, double p) {
  const double norm = schatten_norm(x, p);
  if (norm == 0.0) throw Error(ErrorCode::InvalidArgument, "normsearch: zero start matrix");
  return x / norm;
}

DenseMatrix gaussian_matrix(std::size_t N, CounterRng& rng) {
  const auto n = static_cast<Eigen::Index>(N);
  DenseMatrix x(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) x(r, c) = rng.complex_normal();
  }
  return x;
}

std::vector<DenseMatrix> matrix_unit_start(const DiscreteSymbol& phi) {
  const std::size_t N = phi.dim();
  const int n = phi.arity();
  std::vector<std::size_t> best(static_cast<std::size_t>(n) + 1, 0);
  if (!phi.is_constant()) {
    const auto& vals = phi.values();
    const auto it = std::max_element(vals.begin(), vals.end(),
                                     [](const Complex& a, const Complex& b) { return std::abs(a) < std::abs(b); });
    std::size_t flat = static_cast<std::size_t>(it - vals.begin());
    for (int j = n; j >= 0; --j) {
      best[static_cast<std::size_t>(j)] = flat % N;
      flat /= N;
    }
  }
  std::vector<DenseMatrix> xs;
  for (int j = 0; j < n; ++j) {
    DenseMatrix e = DenseMatrix::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    e(static_cast<Eigen::Index>(best[static_cast<std::size_t>(j)]), static_cast<Eigen::Index>(best[static_cast<std::size_t>(j) + 1])) = 1.0;
    xs.push_back(e);
  }
  return xs;
}

struct AscentRun {
  double value = 0.0;
  std::vector<DenseMatrix> xs;
  std::vector<double> trace;
};

AscentRun ascend(const DiscreteSymbol& phi, const SchattenParams& params, std::vector<DenseMatrix> xs,
                 const NormSearchOptions& opts) {
  const double p = params.p();
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = normalized(xs[i], params.p_list[i]);
  AscentRun run;
  run.value = schatten_norm(schur_multiply(phi, xs), p);
  run.trace.push_back(run.value);
  for (int sweep = 0; sweep < opts.iters; ++sweep) {
    const double before = run.value;
    for (std::size_t slot = 0; slot < xs.size(); ++slot) {
      const DenseMatrix out = schur_multiply(phi, xs);
      if (schatten_norm(out, p) == 0.0) break;
      const DenseMatrix g = dual_element(out, p);
      const DenseMatrix dir = slot_adjoint(phi, xs, slot, g);
      if (dir.norm() == 0.0) continue;
      std::vector<DenseMatrix> trial = xs;
      trial[slot] = dual_element(dir, conjugate_exponent(params.p_list[slot]));
      const double value = schatten_norm(schur_multiply(phi, trial), p);
      // Backtrack: a step that loses value (rounding only, in exact arithmetic) is rejected.
      if (value > run.value) {
        xs = std::move(trial);
        run.value = value;
      }
    }
    run.trace.push_back(run.value);
    if (run.value - before <= opts.rel_tol * std::max(run.value, 1e-300)) break;
  }
  run.xs = std::move(xs);
  return run;
}

}  // namespace

double evaluate_witnesses(const DiscreteSymbol& phi, const SchattenParams& params, const std::vector<DenseMatrix>& xs) {
  double denom = 1.0;
  for (std::size_t i = 0; i < xs.size(); ++i) denom *= schatten_norm(xs[i], params.p_list.at(i));
  if (denom == 0.0) return 0.0;
  return schatten_norm(schur_multiply(phi, xs), params.p()) / denom;
}

double crude_envelope(const DiscreteSymbol& phi, const SchattenParams& params) {
  const double N = static_cast<double>(phi.dim());
  double env = phi.sup_norm() * std::pow(N, std::max(0.0, 1.0 / params.p() - 0.5));
  for (double pi : params.p_list) env *= std::pow(N, std::max(0.0, 0.5 - 1.0 / pi));
  return env;
}

NormEstimate estimate_norm(const DiscreteSymbol& phi, const SchattenParams& params, const NormSearchOptions& opts) {
  // Endpoints 1 and inf are allowed here and flagged in the result.
  if (params.p_list.empty() ||
      std::any_of(params.p_list.begin(), params.p_list.end(), [](double v) { return !(v >= 1.0); }) ||
      !(params.p() >= 1.0)) {
    throw Error(ErrorCode::InvalidExponents, "estimate_norm: exponents must lie in [1, inf] with p >= 1");
  }
  if (params.n() != phi.arity()) throw Error(ErrorCode::DimensionMismatch, "estimate_norm: exponent count differs from arity");
  if (phi.dim() < 2) throw Error(ErrorCode::InvalidArgument, "estimate_norm: need N >= 2");
  if (!opts.start.empty() && opts.start.size() != params.p_list.size()) {
    throw Error(ErrorCode::DimensionMismatch, "estimate_norm: start tuple has the wrong length");
  }
  const std::size_t extra = opts.start.empty() ? 0 : 1;
  const std::size_t total = 1 + extra + static_cast<std::size_t>(std::max(0, opts.restarts));
  std::vector<AscentRun> runs(total);
  const CounterRng root(opts.seed);
  parallel_for(total, [&](std::size_t task) {
    std::vector<DenseMatrix> start;
    if (task == 0) {
      start = matrix_unit_start(phi);
    } else if (task == 1 && extra == 1) {
      start = opts.start;
    } else {
      CounterRng rng = root.split(task);
      for (int i = 0; i < phi.arity(); ++i) start.push_back(gaussian_matrix(phi.dim(), rng));
    }
    runs[task] = ascend(phi, params, std::move(start), opts);
  });

  NormEstimate est;
  est.params = params;
  est.seed = opts.seed;
  est.restarts = static_cast<int>(total);
  std::size_t best = 0;
  for (std::size_t t = 0; t < total; ++t) {
    est.restart_values.push_back(runs[t].value);
    if (runs[t].value > runs[best].value) best = t;
  }
  est.witnesses = runs[best].xs;
  est.trace = runs[best].trace;
  // Reported value is recomputed from the witnesses alone.
  est.value = evaluate_witnesses(phi, params, est.witnesses);
  est.envelope = crude_envelope(phi, params);
  est.endpoint_exponent = std::isinf(params.p()) || params.p() == 1.0 ||
                          std::any_of(params.p_list.begin(), params.p_list.end(),
                                      [](double v) { return std::isinf(v) || v == 1.0; });
  return est;
}

DenseMatrix volterra_witness(int N) {
  if (N < 2) throw Error(ErrorCode::InvalidArgument, "volterra_witness: need N >= 2");
  DenseMatrix x = DenseMatrix::Zero(N, N);
  for (int r = 0; r < N; ++r) {
    for (int c = 0; c <= r; ++c) x(r, c) = 1.0;
  }
  return x;
}

double convergence_check(Construction c, int n, double q, int k, int l, const std::vector<long>& F,
                         std::uint64_t seed, double p) {
  if (n < (c == Construction::First ? 1 : 2)) throw Error(ErrorCode::InvalidArgument, "convergence_check: arity too small");
  const double pi = n * p;
  CounterRng rng(seed);
  std::vector<DenseMatrix> xs;
  for (int i = 0; i < n; ++i) xs.push_back(normalized(gaussian_matrix(F.size(), rng), pi));
  const double nfact = factorial(n);
  const DiscreteSymbol phi = lattice_symbol(c == Construction::First ? 1 : 2, q, k, l, n, F);

  DenseMatrix product = xs[0];
  if (c == Construction::First) {
    for (int i = 1; i < n; ++i) product = product * xs[static_cast<std::size_t>(i)];
    const DenseMatrix target = nfact * (truncate(product, Truncation::Upper) - truncate(product, Truncation::Lower));
    return schatten_norm(schur_multiply(phi, xs) - target, p);
  }
  DenseMatrix target = truncate(xs[0], Truncation::Lower) * truncate(xs[1], Truncation::Upper);
  for (int i = 2; i < n; ++i) target = target * xs[static_cast<std::size_t>(i)];
  target *= nfact;
  std::vector<DenseMatrix> filtered = xs;
  filtered[0] -= truncate(xs[0], Truncation::Diagonal);
  filtered[1] -= truncate(xs[1], Truncation::Diagonal);
  DenseMatrix mult = filtered[0];
  for (int i = 1; i < n; ++i) mult = mult * filtered[static_cast<std::size_t>(i)];
  const DenseMatrix approx = 0.5 * nfact * mult - 0.5 * schur_multiply(phi, filtered);
  return schatten_norm(approx - target, p);
}

ExponentFit fit_exponent(const std::vector<double>& abscissa, const std::vector<double>& values) {
  ExponentFit fit;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < abscissa.size(); ++i) {
    if (abscissa[i] > 0.0 && values[i] > 0.0 && std::isfinite(abscissa[i]) && std::isfinite(values[i])) {
      xs.push_back(std::log(abscissa[i]));
      ys.push_back(std::log(values[i]));
    }
  }
  fit.points = static_cast<int>(xs.size());
  if (xs.size() < 2) return fit;
  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = m * sxx - sx * sx;
  if (denom <= 0.0) return fit;
  fit.exponent = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.exponent * sx) / m;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - intercept - fit.exponent * xs[i];
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / m);
  fit.claimed = fit.residual < 0.05;
  return fit;
}

ExperimentSpec experiment_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known{"symbol", "n", "N", "p_grid", "restarts", "iters", "seed"};
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "experiment: expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw Error(ErrorCode::InvalidConfig, "experiment: unknown key '" + key + "'");
  }
  ExperimentSpec spec;
  try {
    if (j.contains("symbol")) {
      const auto& s = j.at("symbol");
      for (const auto& [key, _] : s.items()) {
        if (key != "kind" && key != "params") throw Error(ErrorCode::InvalidConfig, "experiment: unknown symbol key '" + key + "'");
      }
      spec.kind = s.at("kind").get<std::string>();
      if (s.contains("params")) spec.symbol_params = s.at("params");
    }
    if (j.contains("n")) spec.n = j.at("n").get<int>();
    if (j.contains("N")) spec.N = j.at("N").get<int>();
    if (j.contains("p_grid")) spec.p_grid = j.at("p_grid").get<std::vector<double>>();
    if (j.contains("restarts")) spec.restarts = j.at("restarts").get<int>();
    if (j.contains("iters")) spec.iters = j.at("iters").get<int>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("experiment: ") + e.what());
  }
  if (spec.n < 1 || spec.N < 2 || spec.p_grid.empty() || spec.restarts < 0 || spec.iters < 1) {
    throw Error(ErrorCode::InvalidConfig, "experiment: need n >= 1, N >= 2, a nonempty p grid, iters >= 1");
  }
  for (double p : spec.p_grid) {
    if (!(p >= 1.0)) throw Error(ErrorCode::InvalidConfig, "experiment: p values must be >= 1");
  }
  return spec;
}

nlohmann::json experiment_to_json(const ExperimentSpec& spec) {
  return {{"symbol", {{"kind", spec.kind}, {"params", spec.symbol_params}}},
          {"n", spec.n},
          {"N", spec.N},
          {"p_grid", spec.p_grid},
          {"restarts", spec.restarts},
          {"iters", spec.iters},
          {"seed", spec.seed}};
}

DiscreteSymbol experiment_symbol(const ExperimentSpec& spec) {
  std::vector<long> F(static_cast<std::size_t>(spec.N));
  for (int i = 0; i < spec.N; ++i) F[static_cast<std::size_t>(i)] = i;
  const auto& prm = spec.symbol_params;
  auto linear_only = [&] {
    if (spec.n != 1) throw Error(ErrorCode::InvalidConfig, "experiment: truncation symbols are linear (n = 1)");
  };
  if (spec.kind == "upper") return linear_only(), truncation_symbol(Truncation::Upper, F);
  if (spec.kind == "lower") return linear_only(), truncation_symbol(Truncation::Lower, F);
  if (spec.kind == "diagonal") return linear_only(), truncation_symbol(Truncation::Diagonal, F);
  if (spec.kind == "mult") return DiscreteSymbol::constant(spec.n, F, Complex(1.0, 0.0));
  if (spec.kind == "abs_power") {
    // Symmetric grid avoiding 0: a_n^{[n]} jumps across sign orthants.
    std::vector<double> grid(static_cast<std::size_t>(spec.N));
    for (int i = 0; i < spec.N; ++i) grid[static_cast<std::size_t>(i)] = -1.0 + (2.0 * i + 1.0) / spec.N;
    return sampled_symbol(make_abs_power(spec.n), grid, spec.n, DivDiffScale::SimplexAverage);
  }
  if (spec.kind == "lattice") {
    return lattice_symbol(prm.value("variant", 1), prm.value("q", 0.5), prm.value("k", 4), prm.value("l", 8), spec.n, F);
  }
  throw Error(ErrorCode::InvalidConfig, "experiment: unknown symbol kind '" + spec.kind + "'");
}

SweepResult sweep_and_fit(const ExperimentSpec& spec) {
  const DiscreteSymbol phi = experiment_symbol(spec);
  SweepResult r;
  r.p_grid = spec.p_grid;
  r.estimates.resize(spec.p_grid.size());
  for (std::size_t t = 0; t < spec.p_grid.size(); ++t) {
    NormSearchOptions opts;
    opts.restarts = spec.restarts;
    opts.iters = spec.iters;
    opts.seed = CounterRng(spec.seed).split(t).next_u64();
    r.estimates[t] = estimate_norm(phi, SchattenParams::equal(spec.n, spec.p_grid[t]), opts);
  }
  std::vector<double> big_p, big_v, small_p, small_v;
  for (std::size_t t = 0; t < spec.p_grid.size(); ++t) {
    const double p = spec.p_grid[t];
    if (p >= 2.0 && std::isfinite(p)) {
      big_p.push_back(p);
      big_v.push_back(r.estimates[t].value);
    }
    if (p > 1.0 && p <= 2.0) {
      small_p.push_back(conjugate_exponent(p));
      small_v.push_back(r.estimates[t].value);
    }
  }
  r.large_p = fit_exponent(big_p, big_v);
  r.small_p = fit_exponent(small_p, small_v);
  return r;
}

RemarkTerms remark_identity(std::span<const double> t) {
  if (t.size() != 4) throw Error(ErrorCode::InvalidArgument, "remark_identity: need four values");
  for (double v : t) {
    if (!(v > 0.0)) throw Error(ErrorCode::NonpositiveInput, "remark_identity: values must be positive");
  }
  const double t0 = t[0], t1 = t[1], t2 = t[2], t3 = t[3];
  RemarkTerms r;
  r.I = t1 / (t0 + t1) * t2 / (t1 + t2) * (t2 - t3) / (t2 + t3);
  r.II = t0 / (t0 + t1) * (t0 - t3) / (t0 + t3) * t3 / (t2 + t3);
  r.III = t0 / (t0 + t1) * t2 / (t2 + t3);
  r.IV = -t1 / (t0 + t1) * t1 / (t1 + t2);
  const double nodes[] = {t0, -t1, t2, -t3};
  r.lhs = abs_power_symbol(3, nodes);
  r.residual = std::abs(r.lhs - 6.0 * (r.I + r.II + r.III + r.IV));
  return r;
}

nlohmann::json estimate_to_json(const NormEstimate& e) {
  nlohmann::json w = nlohmann::json::array();
  for (const auto& x : e.witnesses) w.push_back(matrix_to_json(x));
  return {{"value", e.value},
          {"witnesses", w},
          {"restarts", e.restarts},
          {"restart_values", e.restart_values},
          {"trace", e.trace},
          {"p_list", e.params.p_list},
          {"p", e.params.p()},
          {"seed", e.seed},
          {"envelope", e.envelope},
          {"endpoint_exponent", e.endpoint_exponent},
          {"kind", "lower_bound"}};
}

std::string sweep_to_csv(const SweepResult& r) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "p,estimate,envelope,restart_spread,large_p_exponent,large_p_residual,small_p_exponent,small_p_residual\r\n";
  for (std::size_t t = 0; t < r.p_grid.size(); ++t) {
    const auto& e = r.estimates[t];
    const auto [lo, hi] = std::minmax_element(e.restart_values.begin(), e.restart_values.end());
    out << r.p_grid[t] << ',' << e.value << ',' << e.envelope << ',' << (*hi - *lo) << ',' << r.large_p.exponent << ','
        << r.large_p.residual << ',' << r.small_p.exponent << ',' << r.small_p.residual << "\r\n";
  }
  return out.str();
}

}  // namespace schurlab

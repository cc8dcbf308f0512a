#include "schurlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "schurlab/combinatorics.hpp"
#include "schurlab/divdiff.hpp"
#include "schurlab/errors.hpp"
#include "schurlab/partition.hpp"
#include "schurlab/reduction.hpp"
#include "schurlab/rng.hpp"
#include "schurlab/schatten.hpp"
#include "schurlab/symdecomp.hpp"
#include "schurlab/normsearch.hpp"

namespace schurlab {

namespace {

std::vector<SmoothFunction> test_functions() {
  std::vector<SmoothFunction> fs;
  for (int d = 0; d <= 8; ++d) fs.push_back(make_monomial(d));
  fs.push_back(make_exp());
  fs.push_back(make_sin());
  return fs;
}

CheckReport finish(std::string name, double value, double tol, nlohmann::json details = nlohmann::json::object()) {
  CheckReport r;
  r.name = std::move(name);
  r.value = value;
  r.tolerance = tol;
  r.passed = std::isfinite(value) && value <= tol;
  r.details = std::move(details);
  return r;
}

/// count distinct values in [lo, hi] with pairwise gap >= gap.
std::vector<double> spread_values(std::size_t count, double lo, double hi, double gap, CounterRng& rng) {
  for (;;) {
    std::vector<double> v(count);
    for (double& x : v) x = rng.uniform(lo, hi);
    std::vector<double> s = v;
    std::sort(s.begin(), s.end());
    bool ok = true;
    for (std::size_t i = 1; i < s.size(); ++i) ok = ok && s[i] - s[i - 1] >= gap;
    if (ok) return v;
  }
}

/// Random composition of total into parts >= 1.
std::vector<int> random_composition(int total, int parts, CounterRng& rng) {
  std::vector<int> m(static_cast<std::size_t>(parts), 1);
  for (int r = parts; r < total; ++r) ++m[static_cast<std::size_t>(rng.next_u64() % static_cast<std::uint64_t>(parts))];
  return m;
}

/// Insertion point in [lo, hi] keeping the node gap; near-coincident points make the expansion
/// terms near-confluent and their tableaux lose roughly eps / gap^n.
double insertion_point(const std::vector<double>& lam, double lo, double hi, double gap, CounterRng& rng) {
  for (;;) {
    const double xi = rng.uniform(lo, hi);
    if (std::all_of(lam.begin(), lam.end(), [&](double x) { return std::abs(x - xi) >= gap; })) return xi;
  }
}

int random_int(int lo, int hi, CounterRng& rng) {
  return lo + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// Distinct pair (i, j) in [0, count).
std::pair<std::size_t, std::size_t> random_pair(std::size_t count, CounterRng& rng) {
  const std::size_t i = rng.next_u64() % count;
  std::size_t j = rng.next_u64() % (count - 1);
  if (j >= i) ++j;
  return {i, j};
}

/// Taylor magnitude of f near the nodes: max over nodes and k <= n + extra of |f^{(k)}| / k!.
/// Floors relative errors where f^{[n]} vanishes identically (x^d with d < n).
double divdiff_scale(const SmoothFunction& f, const NodeVector& nodes, int extra = 0) {
  const int n = nodes.order() + extra;
  double m = 0.0;
  for (double x : nodes.nodes()) {
    for (int k = 0; k <= n; ++k) m = std::max(m, std::abs(f.eval(x, k)) / factorial(k));
  }
  return m;
}

/// |lhs - rhs| over max(|lhs|, sum |c_t v_t|, Taylor magnitude of f).
double expansion_residual(const SmoothFunction& f, double lhs, const ReductionExpansion& e, const NodeVector& nodes) {
  double rhs = 0.0, scale = std::max(std::abs(lhs), divdiff_scale(f, nodes));
  double sum_abs = 0.0;
  for (const auto& t : e.terms) {
    const double v = t.coefficient * divdiff_eval(f, t.nodes);
    rhs += v;
    sum_abs += std::abs(v);
  }
  scale = std::max({scale, sum_abs, 1e-300});
  return std::abs(lhs - rhs) / scale;
}

}  // namespace

nlohmann::json report_to_json(const CheckReport& r) {
  return {{"name", r.name}, {"value", r.value}, {"tolerance", r.tolerance}, {"passed", r.passed}, {"details", r.details}};
}

std::vector<CheckReport> verify_reductions(int n_min, int n_max, int trials, std::uint64_t seed, double tol) {
  if (n_min < 1 || n_max < n_min || trials < 1) throw Error(ErrorCode::InvalidArgument, "verify_reductions: bad range");
  const auto fs = test_functions();
  const char* names[] = {"insertion", "multiplicity", "algebraic", "zero_insertion"};
  double worst[4] = {0, 0, 0, 0};
  long evaluations[4] = {0, 0, 0, 0};
  const CounterRng root(seed);
  for (int n = n_min; n <= n_max; ++n) {
    CounterRng rng = root.split(static_cast<std::uint64_t>(n));
    for (int t = 0; t < trials; ++t) {
      // Simple nodes, one insertion point.
      {
        const auto lam = spread_values(static_cast<std::size_t>(n) + 1, -2.0, 2.0, 0.1, rng);
        const NodeVector nodes = NodeVector::simple(lam);
        const auto [i, j] = random_pair(lam.size(), rng);
        const auto e = reduce_general(nodes, i, j, insertion_point(lam, -2.0, 2.0, 0.1, rng));
        for (const auto& f : fs) worst[0] = std::max(worst[0], expansion_residual(f, divdiff_eval(f, nodes), e, nodes));
        evaluations[0] += static_cast<long>(fs.size());
      }
      // Multiplicities, general insertion point, then the algebraic case.
      for (int kind = 1; kind <= 2; ++kind) {
        const int blocks = random_int(2, n + 1, rng);
        const auto lam = spread_values(static_cast<std::size_t>(blocks), -2.0, 2.0, 0.1, rng);
        const NodeVector nodes(lam, random_composition(n + 1, blocks, rng));
        const auto [i, j] = random_pair(lam.size(), rng);
        const auto e = kind == 1 ? reduce_general(nodes, i, j, insertion_point(lam, -2.0, 2.0, 0.1, rng))
                                 : reduce_algebraic(nodes, i, j, rng.next_u64() % lam.size());
        for (const auto& f : fs) worst[kind] = std::max(worst[kind], expansion_residual(f, divdiff_eval(f, nodes), e, nodes));
        evaluations[kind] += static_cast<long>(fs.size());
      }
      // Zero insertion on nonzero simple nodes.
      {
        std::vector<double> tv;
        do {
          tv = spread_values(static_cast<std::size_t>(n) + 1, -2.0, 2.0, 0.1, rng);
        } while (std::any_of(tv.begin(), tv.end(), [](double v) { return std::abs(v) < 0.1; }));
        const auto [i, j] = random_pair(tv.size(), rng);
        const auto e = reduce_zero_insert(tv, i, j);
        const NodeVector nodes = NodeVector::simple(tv);
        for (const auto& f : fs) worst[3] = std::max(worst[3], expansion_residual(f, divdiff_eval(f, nodes), e, nodes));
        evaluations[3] += static_cast<long>(fs.size());
      }
    }
  }
  std::vector<CheckReport> out;
  for (int k = 0; k < 4; ++k) {
    out.push_back(finish(std::string("reduction.") + names[k], worst[k], tol,
                         {{"n_min", n_min}, {"n_max", n_max}, {"trials_per_n", trials}, {"evaluations", evaluations[k]},
                          {"seed", seed}, {"metric", "max |lhs-rhs| / max(|lhs|, sum|terms|, max_k |f^(k)|/k! at nodes)"}}));
  }
  return out;
}

std::vector<CheckReport> verify_divdiff(int trials, long oracle_samples, std::uint64_t seed, double tol) {
  const auto fs = test_functions();
  const CounterRng root(seed);
  CounterRng rng = root.split(0);
  double perm_worst = 0.0, conf_worst = 0.0;
  nlohmann::json conf_case;
  double order_sum = 0.0;
  int order_count = 0;
  for (int t = 0; t < trials; ++t) {
    const int n = random_int(1, 5, rng);
    const SmoothFunction& f = fs[rng.next_u64() % fs.size()];
    const int blocks = random_int(1, n + 1, rng);
    const auto lam = spread_values(static_cast<std::size_t>(blocks), -2.0, 2.0, 0.1, rng);
    const auto mult = random_composition(n + 1, blocks, rng);
    const NodeVector nodes(lam, mult);
    std::vector<std::size_t> perm(lam.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t a = perm.size(); a > 1; --a) std::swap(perm[a - 1], perm[rng.next_u64() % a]);
    std::vector<double> pl;
    std::vector<int> pm;
    for (std::size_t a : perm) {
      pl.push_back(lam[a]);
      pm.push_back(mult[a]);
    }
    const double v0 = divdiff_eval(f, nodes), v1 = divdiff_eval(f, NodeVector(pl, pm));
    const double scale = std::max({std::abs(v0), divdiff_scale(f, nodes), 1e-300});
    perm_worst = std::max(perm_worst, std::abs(v0 - v1) / scale);

    // Confluent limit: one doubled node split symmetrically. D(h) = D(0) + c h^2 + O(h^4), so a
    // Richardson step at h = 1e-3 reaches the limit without the roundoff of near-coincident nodes.
    // The O(h^4) remainder involves f^{(n+4)}, hence the wider Taylor scale.
    const auto base = spread_values(static_cast<std::size_t>(n), -2.0, 2.0, 0.3, rng);
    std::vector<int> m(base.size(), 1);
    m[0] = 2;
    const NodeVector confluent(base, m);
    const double exact = divdiff_eval(f, confluent);
    const double cscale = std::max({std::abs(exact), divdiff_scale(f, confluent, 4), 1e-300});
    auto split = [&](double lo, double hi) {
      std::vector<double> s = base;
      s[0] = base[0] + hi;
      s.push_back(base[0] + lo);
      return divdiff_eval(f, NodeVector::simple(s));
    };
    const double h = 1e-3;
    const double limit = (4.0 * split(-h / 2, h / 2) - split(-h, h)) / 3.0;
    const double conf_err = std::abs(limit - exact) / cscale;
    if (conf_err > conf_worst) {
      conf_worst = conf_err;
      conf_case = {{"n", n}, {"f", f.label}, {"nodes", base}, {"confluent", exact}, {"limit", limit}};
    }
    const double e1 = std::abs(split(0.0, h) - exact), e2 = std::abs(split(0.0, h / 2) - exact);
    if (e1 > 1e-10 * cscale && e2 > 0.0) {
      order_sum += std::log2(e1 / e2);
      ++order_count;
    }
  }

  double worst_z = 0.0, worst_excess = 0.0;
  nlohmann::json oracle_cases = nlohmann::json::array();
  CounterRng orng = root.split(1);
  for (int n = 1; n <= 4; ++n) {
    const SmoothFunction cases[] = {make_monomial(n + 1), make_exp(), make_sin()};
    for (const auto& f : cases) {
      const NodeVector nodes = NodeVector::simple(spread_values(static_cast<std::size_t>(n) + 1, -1.0, 1.0, 0.05, orng));
      const double exact = divdiff_eval(f, nodes);
      const auto est = divdiff_simplex_oracle(f, nodes, oracle_samples, orng.next_u64());
      const double diff = std::abs(est.estimate - exact);
      const double z = est.stderr_ > 0.0 ? diff / est.stderr_ : (diff > 1e-12 ? INFINITY : 0.0);
      worst_z = std::max(worst_z, z);
      worst_excess = std::max(worst_excess, diff - 3.0 * est.stderr_ - 1e-12);
      oracle_cases.push_back({{"n", n}, {"f", f.label}, {"exact", exact}, {"estimate", est.estimate}, {"stderr", est.stderr_}});
    }
  }
  std::vector<CheckReport> out;
  const nlohmann::json meta = {{"trials", trials}, {"seed", seed}, {"metric", "|a-b| / max(|a|, max_k |f^(k)|/k! at nodes)"}};
  out.push_back(finish("divdiff.permutation", perm_worst, tol, meta));
  nlohmann::json cmeta = meta;
  cmeta["split"] = "symmetric +-h, Richardson over h = 1e-3, 5e-4";
  cmeta["metric"] = "|limit-confluent| / max(|confluent|, max_{k<=n+4} |f^(k)|/k! at nodes)";
  cmeta["worst_case"] = conf_case;
  cmeta["one_sided_order"] = order_count ? order_sum / order_count : 0.0;
  out.push_back(finish("divdiff.confluent_limit", conf_worst, tol, cmeta));
  CheckReport oracle = finish("divdiff.simplex_oracle_z", worst_z, 3.0,
                              {{"samples", oracle_samples}, {"cases", oracle_cases}, {"rule", "|diff| <= 3 stderr + 1e-12"}});
  oracle.passed = worst_excess <= 0.0;
  out.push_back(oracle);
  return out;
}

std::vector<CheckReport> verify_decomposition(int n, int trials, std::uint64_t seed, double tol) {
  if (n < 2 || n > 3) throw Error(ErrorCode::SizeGuard, "verify_decomposition: n must be 2 or 3");
  const FinalDecomposition dec = build_final_decomposition(n);
  const DecompositionTable& table = dec.table;
  const SmoothFunction fs[] = {make_exp(), make_sin(), make_monomial(n + 2)};
  CounterRng rng(seed, static_cast<std::uint64_t>(n));
  double core_worst = 0.0, final_worst = 0.0;
  long structural_bad = 0, structural_total = 0;
  for (int t = 0; t < trials; ++t) {
    const auto lam = sample_separated_point(n, rng);
    for (const auto& f : fs) {
      const double lhs = divdiff_eval(f, NodeVector::simple(lam));
      core_worst = std::max(core_worst, std::abs(lhs - evaluate_core_expansion(f, lam, table)) / (1.0 + std::abs(lhs)));
      final_worst = std::max(final_worst, verify_final_decomposition(f, lam, dec) / (1.0 + std::abs(lhs)));
    }
    for (const auto& term : dec.terms) {
      const auto xi = xi_coordinates(term.H.sequence(), lam);
      ++structural_total;
      const double expect = lam[static_cast<std::size_t>(term.upper)] - lam[static_cast<std::size_t>(term.lower)];
      if (xi.back() != expect) ++structural_bad;
    }
  }
  long nonpositive = 0;
  for (const auto& e : table.entries) {
    for (int v = 0; v < e.Q.num_vars(); ++v) {
      if (e.Q.min_degree_in(v) < 1) {
        ++nonpositive;
        break;
      }
    }
  }
  const nlohmann::json meta = {{"n", n}, {"k", n - 1}, {"trials", trials}, {"seed", seed},
                               {"functions", {"exp", "sin", "x^" + std::to_string(n + 2)}},
                               {"metric", "|lhs-rhs| / (1+|lhs|)"}, {"min_gap", "1e-3 spread"}};
  std::vector<CheckReport> out;
  const std::string tag = "decomposition.n" + std::to_string(n);
  out.push_back(finish(tag + ".core", core_worst, tol, meta));
  out.push_back(finish(tag + ".final", final_worst, tol, meta));
  out.push_back(finish(tag + ".monomial_positivity", static_cast<double>(nonpositive), 0.0,
                       {{"entries", table.entries.size()}, {"failing", nonpositive}}));
  out.push_back(finish(tag + ".terminal_coordinates", static_cast<double>(structural_bad), 0.0,
                       {{"checked", structural_total}, {"mismatched", structural_bad}}));
  return out;
}

std::vector<CheckReport> verify_partition(int samples, std::uint64_t seed, double tol) {
  CounterRng rng(seed);
  double sum_worst = 0.0, homog_worst = 0.0, transl_worst = 0.0;
  long support_bad = 0;
  for (int s = 0; s < samples; ++s) {
    const int k = random_int(2, 5, rng);
    std::vector<double> x(static_cast<std::size_t>(k));
    for (double& v : x) v = rng.normal() * std::exp(rng.uniform(-3.0, 3.0));
    const SpherePartition part(k);
    const auto w = part.eval_all(x);
    sum_worst = std::max(sum_worst, std::abs(std::accumulate(w.begin(), w.end(), 0.0) - 1.0));
    for (int l = 0; l < k; ++l) {
      if (!part.in_chart(l, x) && w[static_cast<std::size_t>(l)] != 0.0) ++support_bad;
    }
    std::vector<double> y = x;
    for (double& v : y) v *= 7.3;
    const auto wy = part.eval_all(y);
    for (std::size_t l = 0; l < w.size(); ++l) homog_worst = std::max(homog_worst, std::abs(w[l] - wy[l]));

    const int n = k;
    std::vector<double> lam(static_cast<std::size_t>(n) + 1);
    for (double& v : lam) v = rng.uniform(-1.0, 1.0);
    std::vector<int> I(lam.size());
    std::iota(I.begin(), I.end(), 0);
    const double c = rng.uniform(-1.0, 1.0);
    std::vector<double> shifted = lam;
    for (double& v : shifted) v += c;
    for (std::size_t a = 1; a < I.size(); ++a) {
      transl_worst = std::max(transl_worst, std::abs(theta_eval(I, I[a], lam) - theta_eval(I, I[a], shifted)));
    }
  }
  const nlohmann::json meta = {{"samples", samples}, {"seed", seed}};
  return {finish("partition.sum_to_one", sum_worst, tol, meta),
          finish("partition.support", static_cast<double>(support_bad), 0.0, meta),
          finish("partition.homogeneity", homog_worst, tol, meta),
          finish("partition.translation", transl_worst, 1e-9, meta)};
}

HomogeneousSymbol partition_bump_symbol(int n, int variant) {
  if (n < 2 || n > 3 || variant < 0 || variant > 1) throw Error(ErrorCode::InvalidArgument, "bump symbol: n in {2,3}, variant in {0,1}");
  HomogeneousSymbol s;
  s.n = n;
  s.margins.assign(static_cast<std::size_t>(n - 1), 0.5);
  s.eval = [n, variant](std::span<const double> xi) {
    const SpherePartition pair(2);
    double v = 1.0;
    for (int k = 0; k + 1 < n && v != 0.0; ++k) {
      const double x[2] = {xi[static_cast<std::size_t>(k)], xi[static_cast<std::size_t>(k) + 1]};
      if (x[0] == 0.0 && x[1] == 0.0) return Complex(0.0, 0.0);
      const auto w = pair.eval_all(x);
      v *= w[0] * w[1];
    }
    if (variant == 1 && v != 0.0) v *= xi[static_cast<std::size_t>(n) - 1] / xi[0];
    return Complex(v, 0.0);
  };
  return s;
}

std::vector<CheckReport> verify_fourier(int n, int points, std::uint64_t seed, double tol) {
  const std::size_t full = points > 0 ? static_cast<std::size_t>(points) : default_points(n);
  std::vector<int> variants = n == 2 ? std::vector<int>{0, 1} : std::vector<int>{1};
  std::vector<CheckReport> out;
  for (int variant : variants) {
    const HomogeneousSymbol phi = partition_bump_symbol(n, variant);
    compress_to_psi(phi, 2000, seed);
    std::vector<std::vector<double>> pts;
    CounterRng rng(seed, static_cast<std::uint64_t>(10 * n + variant));
    for (int t = 0; t < 100; ++t) {
      std::vector<double> xi(static_cast<std::size_t>(n));
      for (double& v : xi) {
        do v = rng.uniform(-1.0, 1.0);
        while (v == 0.0);
      }
      pts.push_back(xi);
    }
    auto error_at = [&](std::size_t m, double& h, double& boundary) {
      const FourierWeights w = fourier_weights(phi, m);
      h = w.h;
      boundary = w.boundary_ratio;
      double err = 0.0;
      for (const auto& xi : pts) err = std::max(err, std::abs(reconstruct(w, xi) - phi.eval(xi)));
      return err;
    };
    double h_full = 0, b_full = 0, h_half = 0, b_half = 0;
    const double e_full = error_at(full, h_full, b_full);
    const double e_half = error_at(full / 2, h_half, b_half);
    const std::string tag = "fourier.n" + std::to_string(n) + ".variant" + std::to_string(variant);
    const nlohmann::json meta = {{"points_per_axis", full}, {"h", h_full}, {"L", kDefaultHalfWidth},
                                 {"K", default_upper_end(phi)}, {"boundary_ratio", b_full}, {"test_points", pts.size()},
                                 {"seed", seed}};
    out.push_back(finish(tag + ".reconstruction", e_full, tol, meta));
    // Error must at least halve per halving of h; 2x slack leaves "does not grow".
    CheckReport refine = finish(tag + ".refinement_ratio", e_half > 0.0 ? e_full / e_half : 0.0, 1.0,
                                {{"error_h", e_full}, {"error_2h", e_half}, {"h", h_full}, {"2h", h_half}, {"floor", 1e-10}});
    refine.passed = e_full <= e_half || e_full <= 1e-10;
    out.push_back(refine);
  }
  return out;
}

CheckReport verify_remark(int trials, std::uint64_t seed, double tol) {
  CounterRng rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double v[4] = {rng.uniform(0.1, 10.0), rng.uniform(0.1, 10.0), rng.uniform(0.1, 10.0), rng.uniform(0.1, 10.0)};
    worst = std::max(worst, remark_identity(v).residual);
  }
  return finish("remark.four_term_identity", worst, tol, {{"trials", trials}, {"seed", seed}, {"range", {0.1, 10.0}}});
}

std::vector<CheckReport> verify_exact_values(std::uint64_t seed) {
  std::vector<CheckReport> out;
  // Same-sign tuples give sigma n!.
  CounterRng rng(seed);
  double orthant = 0.0, tableau = 0.0;
  for (int n = 1; n <= 4; ++n) {
    for (int t = 0; t < 200; ++t) {
      const double sigma = t % 2 ? -1.0 : 1.0;
      auto v = spread_values(static_cast<std::size_t>(n) + 1, 0.01, 10.0, 1e-3, rng);
      for (double& x : v) x *= sigma;
      orthant = std::max(orthant, std::abs(abs_power_symbol(n, v) - sigma * factorial(n)));
      tableau = std::max(tableau, std::abs(factorial(n) * divdiff_eval(make_abs_power(n), NodeVector::simple(v)) - sigma * factorial(n)));
    }
  }
  out.push_back(finish("exact.same_sign_orthant", orthant, 1e-12,
                       {{"n_max", 4}, {"tuples_per_n", 200}, {"generic_tableau_error", tableau}}));

  // Worked example n = 4, F = (1,+,2,-,4,-).
  const ChoiceSequence F(4, {{1, Sign::Plus}, {2, Sign::Minus}, {4, Sign::Minus}});
  struct Row {
    std::vector<int> I;
    int pick, lower;
    std::optional<int> upper;
  };
  const Row expected[] = {{{0, 1, 2, 3, 4}, 1, 0, 2}, {{0, 2, 3, 4}, 2, 0, 3}, {{2, 3, 4}, 4, 3, 2}, {{2, 4}, 4, 2, std::nullopt}};
  int mismatches = 0;
  nlohmann::json rows = nlohmann::json::array();
  for (int l = 1; l <= 4; ++l) {
    const IndexData d = index_data(F, l);
    const Row& e = expected[l - 1];
    const bool upper_ok = l == 4 || d.upper == e.upper;
    if (d.index_set != e.I || d.pick != e.pick || d.lower != e.lower || !upper_ok) ++mismatches;
    rows.push_back({{"l", l}, {"I", d.index_set}, {"F_l", d.pick.value_or(-1)}, {"F_l_minus", d.lower.value_or(-1)},
                    {"F_l_plus", l == 4 ? -1 : d.upper.value_or(-1)}});
  }
  const auto all = enumerate_choice_sequences(4, 3);
  if (std::find(all.begin(), all.end(), F) == all.end()) ++mismatches;
  out.push_back(finish("exact.worked_choice_sequence", mismatches, 0.0, {{"sequence", F.to_string()}, {"rows", rows}}));

  // Lattice limits at q = 1/2, k = 40, l = 80 on tuples whose middle indices dominate.
  const double q = 0.5;
  const int k = 40, l = 2 * k;
  const std::vector<long> idx{0, 1, 2, 3};
  double worst = 0.0;
  long tuples = 0;
  for (int variant = 1; variant <= 2; ++variant) {
    for (int n = variant; n <= 4; ++n) {
      const DiscreteSymbol phi = lattice_symbol(variant, q, k, l, n, idx);
      std::vector<std::size_t> s(static_cast<std::size_t>(n) + 1, 0);
      const std::size_t total = static_cast<std::size_t>(std::pow(4.0, n + 1));
      for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (int j = n; j >= 0; --j) {
          s[static_cast<std::size_t>(j)] = rem % 4;
          rem /= 4;
        }
        bool valid = true;
        for (int j = 0; j <= n; ++j) {
          const bool outer = variant == 1 ? (j == 0 || j == n) : j <= 2;
          const std::size_t v = s[static_cast<std::size_t>(j)];
          valid = valid && (outer ? v <= 2 : v >= 2);
        }
        if (variant == 2) valid = valid && s[0] != s[1] && s[1] != s[2];
        if (!valid) continue;
        double expect;
        if (variant == 1) {
          const long a = static_cast<long>(s[0]), b = static_cast<long>(s[static_cast<std::size_t>(n)]);
          expect = a < b ? factorial(n) : (a > b ? -factorial(n) : 0.0);
        } else {
          expect = (s[0] > s[1] && s[1] < s[2]) ? -factorial(n) : factorial(n);
        }
        worst = std::max(worst, std::abs(phi(s).real() - expect) / factorial(n));
        ++tuples;
      }
    }
  }
  out.push_back(finish("exact.lattice_limits", worst, 1e-6,
                       {{"q", q}, {"k", k}, {"l", l}, {"tuples", tuples}, {"metric", "max |value - limit| / n!"},
                        {"regime", "outer indices in {0,1,2}, middle indices in {2,3}"}}));
  return out;
}

}  // namespace schurlab

#include "schurlab/symdecomp.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "schurlab/errors.hpp"
#include "schurlab/partition.hpp"

namespace schurlab {

namespace {

using Key = std::pair<ChoiceSequence, std::vector<int>>;

struct KeyLess {
  bool operator()(const Key& a, const Key& b) const {
    if (a.first < b.first) return true;
    if (b.first < a.first) return false;
    return a.second < b.second;
  }
};

std::size_t position(const std::vector<int>& set, int i) {
  return static_cast<std::size_t>(std::find(set.begin(), set.end(), i) - set.begin());
}

}  // namespace

DecompositionTable build_Q_table(int n, int k) {
  if (n > 6) throw Error(ErrorCode::SizeGuard, "build_Q_table: n must be <= 6");
  if (n < 1 || k < 0 || k > n - 1) throw Error(ErrorCode::InvalidArgument, "build_Q_table: need 0 <= k <= n-1");

  std::map<Key, MultiVarPolynomial, KeyLess> level;
  level.emplace(Key{ChoiceSequence(n, {}), std::vector<int>(static_cast<std::size_t>(n) + 1, 1)},
                MultiVarPolynomial::constant(0, 1));

  for (int step = 0; step < k; ++step) {
    std::map<Key, MultiVarPolynomial, KeyLess> next;
    for (const auto& [key, Q] : level) {
      const auto& [F, alpha] = key;
      const std::vector<int>& I = F.index_set(step + 1);
      // Split by the partition over I; the minimum of I is never picked.
      for (std::size_t a = 1; a < I.size(); ++a) {
        const int i = I[a];
        const int lo = I[a - 1];
        const int hi = a + 1 < I.size() ? I[a + 1] : I[0];
        const int ai = alpha[a], alo = alpha[a - 1], ahi = alpha[position(I, hi)];

        const ChoiceSequence Fp = F.extended({i, Sign::Plus});
        const std::vector<int>& Ip = Fp.index_set(step + 2);
        for (int l = 0; l < alo; ++l) {
          std::vector<int> beta(Ip.size());
          for (std::size_t b = 0; b < Ip.size(); ++b) beta[b] = alpha[position(I, Ip[b])];
          beta[position(Ip, lo)] = alo - l;
          beta[position(Ip, hi)] = ai + ahi + l;
          auto [it, fresh] = next.try_emplace(Key{Fp, beta}, MultiVarPolynomial(step + 1));
          it->second += Q.append_variable(p_poly(ai, l));
        }

        const ChoiceSequence Fm = F.extended({i, Sign::Minus});
        const std::vector<int>& Im = Fm.index_set(step + 2);
        for (int l = 0; l < ai; ++l) {
          std::vector<int> beta(Im.size());
          for (std::size_t b = 0; b < Im.size(); ++b) beta[b] = alpha[position(I, Im[b])];
          beta[position(Im, i)] = ai - l;
          beta[position(Im, hi)] = alo + ahi + l;
          auto [it, fresh] = next.try_emplace(Key{Fm, beta}, MultiVarPolynomial(step + 1));
          it->second += Q.append_variable(p_poly(alo, l));
        }
      }
    }
    level = std::move(next);
  }

  DecompositionTable table;
  table.n = n;
  table.k = k;
  table.sequences = enumerate_choice_sequences(n, k);
  std::map<ChoiceSequence, std::size_t> index_of;
  for (std::size_t s = 0; s < table.sequences.size(); ++s) index_of.emplace(table.sequences[s], s);
  for (auto& [key, Q] : level) {
    if (Q.is_zero()) continue;
    table.entries.push_back({index_of.at(key.first), key.second, std::move(Q)});
  }
  std::sort(table.entries.begin(), table.entries.end(), [](const TableEntry& a, const TableEntry& b) {
    return a.sequence != b.sequence ? a.sequence < b.sequence : a.alpha < b.alpha;
  });
  return table;
}

double theta_product(const ChoiceSequence& F, std::span<const double> lambda) {
  double t = 1.0;
  for (int l = 1; l <= F.k() && t != 0.0; ++l) {
    t *= theta_eval(F.index_set(l), F.picks()[static_cast<std::size_t>(l - 1)].index, lambda);
  }
  return t;
}

double evaluate_core_expansion(const SmoothFunction& f, std::span<const double> lambda,
                               const DecompositionTable& table) {
  if (lambda.size() != static_cast<std::size_t>(table.n) + 1) {
    throw Error(ErrorCode::DimensionMismatch, "core expansion: lambda must have n+1 entries");
  }
  if (!is_in_D(lambda)) throw Error(ErrorCode::OffDomain, "core expansion: coordinates must be pairwise distinct");
  double total = 0.0;
  std::size_t cached = table.sequences.size();
  double weight = 0.0;
  std::vector<double> zeta(static_cast<std::size_t>(table.k));
  for (const TableEntry& e : table.entries) {
    const ChoiceSequence& F = table.sequence_of(e);
    if (e.sequence != cached) {
      cached = e.sequence;
      weight = theta_product(F, lambda);
      if (weight != 0.0) {
        for (int l = 1; l <= table.k; ++l) zeta[static_cast<std::size_t>(l - 1)] = *zeta_xi_eval(F, l, lambda).zeta;
      }
    }
    if (weight == 0.0) continue;
    const std::vector<int>& I = F.index_set(table.k + 1);
    std::vector<double> nodes;
    for (int i : I) nodes.push_back(lambda[static_cast<std::size_t>(i)]);
    total += weight * e.Q.evaluate(zeta) * divdiff_eval(f, NodeVector(nodes, e.alpha));
  }
  return total;
}

HSymbol::HSymbol(const ChoiceSequence& F, std::vector<int> alpha, MultiVarPolynomial Q)
    : F_(F), alpha_(std::move(alpha)), Q_(std::move(Q)) {
  const int n = F_.n();
  if (F_.k() != n - 1) throw Error(ErrorCode::InvalidArgument, "HSymbol: F must have n-1 picks");
  for (int k = 1; k <= n - 1; ++k) {
    const DifferenceBasis basis = difference_basis(F_, k);
    std::vector<std::vector<double>> T;
    for (const auto& row : basis.T) {
      std::vector<double> r;
      for (const auto& c : row) r.push_back(static_cast<double>(c));
      T.push_back(std::move(r));
    }
    T_.push_back(std::move(T));
    pivot_.push_back(basis.pivot_row);
    if (k == 1) {
      for (const auto& row : basis.R) {
        std::vector<double> r;
        for (const auto& c : row) r.push_back(static_cast<double>(c));
        R_.push_back(std::move(r));
      }
    }
  }
  for (const auto& [e, c] : Q_.terms()) terms_.push_back({e, static_cast<double>(c)});
}

double HSymbol::margin(int k) const {
  // On the support of the level-k weight every difference over I_{F,k} is below
  // 2|xi_k|, and xi_{k+1} is a sum of at most |I_{F,k}| - 1 of them.
  const auto& I = F_.index_set(k);
  return 1.0 / (2.0 * static_cast<double>(I.size() - 1));
}

double HSymbol::operator()(std::span<const double> xi) const {
  const int n = F_.n();
  if (xi.size() != static_cast<std::size_t>(n)) throw Error(ErrorCode::DimensionMismatch, "H: xi must have n entries");
  double weight = 1.0;
  for (int k = 1; k <= n - 1 && weight != 0.0; ++k) {
    const auto& T = T_[static_cast<std::size_t>(k - 1)];
    std::vector<double> diffs(T.size(), 0.0);
    for (std::size_t a = 0; a < T.size(); ++a) {
      for (std::size_t j = 0; j < T[a].size(); ++j) diffs[a] += T[a][j] * xi[static_cast<std::size_t>(k - 1) + j];
    }
    weight *= SpherePartition(static_cast<int>(diffs.size())).eval(pivot_[static_cast<std::size_t>(k - 1)], diffs);
  }
  if (weight == 0.0) return 0.0;
  std::vector<double> zeta(static_cast<std::size_t>(n - 1), 0.0);
  for (std::size_t l = 0; l < zeta.size(); ++l) {
    double num = 0.0;
    for (std::size_t c = 0; c < R_[l].size(); ++c) num += R_[l][c] * xi[c + 1];
    zeta[l] = num / xi[l];
  }
  double q = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (int d = 0; d < e[i]; ++d) m *= zeta[i];
    }
    q += m;
  }
  return weight * q;
}

double evaluate_H(const ChoiceSequence& F, const std::vector<int>& alpha,
                  const DecompositionTable& table, std::span<const double> xi) {
  if (table.k != table.n - 1 || F.n() != table.n) {
    throw Error(ErrorCode::InvalidArgument, "evaluate_H: table must be built with k = n-1 for this n");
  }
  for (std::size_t j = 0; j + 1 < xi.size(); ++j) {
    if (xi[j] == 0.0) throw Error(ErrorCode::DegenerateDenominator, "evaluate_H: xi_j = 0 for j < n");
  }
  const auto seq = std::find(table.sequences.begin(), table.sequences.end(), F);
  if (seq == table.sequences.end()) throw Error(ErrorCode::InvalidArgument, "evaluate_H: F not in table");
  const std::size_t s = static_cast<std::size_t>(seq - table.sequences.begin());
  for (const TableEntry& e : table.entries) {
    if (e.sequence == s && e.alpha == alpha) return HSymbol(F, alpha, e.Q)(xi);
  }
  return 0.0;
}

std::vector<double> xi_coordinates(const ChoiceSequence& F, std::span<const double> lambda) {
  std::vector<double> xi;
  for (int l = 1; l <= F.n(); ++l) xi.push_back(zeta_xi_eval(F, l, lambda).xi);
  return xi;
}

FinalDecomposition build_final_decomposition(int n) {
  if (n < 2 || n > 3) throw Error(ErrorCode::SizeGuard, "final decomposition: n must be 2 or 3");
  FinalDecomposition d;
  d.n = n;
  d.table = build_Q_table(n, n - 1);
  for (const TableEntry& e : d.table.entries) {
    const ChoiceSequence& F = d.table.sequence_of(e);
    const IndexData last = index_data(F, n);
    const std::vector<int>& I = F.index_set(n);
    // The last xi coordinate and the terminal divided difference share their indices.
    if (I.size() != 2 || *last.lower != I[0] || *last.pick != I[1] || e.alpha.size() != 2) {
      throw Error(ErrorCode::SingularSystem, "final decomposition: terminal coordinates do not match");
    }
    d.terms.push_back({HSymbol(F, e.alpha, e.Q), I[0], I[1]});
  }
  return d;
}

double verify_final_decomposition(const SmoothFunction& f, std::span<const double> lambda,
                                  const FinalDecomposition& decomposition) {
  const int n = decomposition.n;
  if (lambda.size() != static_cast<std::size_t>(n) + 1) {
    throw Error(ErrorCode::DimensionMismatch, "final decomposition: lambda must have n+1 entries");
  }
  if (!is_in_D(lambda)) throw Error(ErrorCode::OffDomain, "final decomposition: coordinates must be pairwise distinct");
  double total = 0.0;
  for (const FinalTerm& t : decomposition.terms) {
    const double h = t.H(xi_coordinates(t.H.sequence(), lambda));
    if (h == 0.0) continue;
    const NodeVector nodes({lambda[static_cast<std::size_t>(t.lower)], lambda[static_cast<std::size_t>(t.upper)]},
                           t.H.alpha());
    total += h * divdiff_eval(f, nodes);
  }
  return std::abs(divdiff_eval(f, NodeVector::simple({lambda.begin(), lambda.end()})) - total);
}

double verify_final_decomposition(const SmoothFunction& f, std::span<const double> lambda, int n) {
  return verify_final_decomposition(f, lambda, build_final_decomposition(n));
}

std::vector<double> sample_separated_point(int n, CounterRng& rng) {
  std::vector<double> x(static_cast<std::size_t>(n) + 1);
  for (;;) {
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    std::vector<double> s = x;
    std::sort(s.begin(), s.end());
    const double spread = s.back() - s.front();
    bool ok = spread > 0.0;
    for (std::size_t i = 1; i < s.size() && ok; ++i) ok = s[i] - s[i - 1] >= 1e-3 * spread;
    if (ok) return x;
  }
}

nlohmann::json table_to_json(const DecompositionTable& table) {
  nlohmann::json entries = nlohmann::json::array();
  for (const TableEntry& e : table.entries) {
    const ChoiceSequence& F = table.sequence_of(e);
    nlohmann::json picks = nlohmann::json::array();
    for (const Pick& p : F.picks()) {
      picks.push_back(p.index);
      picks.push_back(p.sign == Sign::Plus ? "+" : "-");
    }
    nlohmann::json poly = nlohmann::json::array();
    for (const auto& [exps, c] : e.Q.terms()) poly.push_back({exps, rational_to_string(c)});
    entries.push_back({{"F", picks}, {"indices", F.index_set(table.k + 1)}, {"alpha", e.alpha}, {"poly", poly}});
  }
  return {{"n", table.n}, {"k", table.k}, {"entries", entries}};
}

}  // namespace schurlab

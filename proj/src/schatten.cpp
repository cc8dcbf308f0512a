#include "schurlab/schatten.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "schurlab/errors.hpp"
#include "schurlab/parallel.hpp"

namespace schurlab {

namespace {

Eigen::VectorXd singular_values(const DenseMatrix& x) {
  if (x.size() == 0) return Eigen::VectorXd();
  return Eigen::BDCSVD<DenseMatrix>(x).singularValues();
}

void check_exponent(double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidExponents, "Schatten exponent must lie in [1, inf]");
}

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

/// Calls visit(s, weight) for every tuple s with weight = prod_{j != skip} x_j[s_{j-1}, s_j].
template <class Visit>
void for_each_chain(std::size_t N, const std::vector<DenseMatrix>& xs, std::size_t skip, Visit&& visit) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> s(n + 1, 0);
  std::vector<Complex> prefix(n + 1, Complex(1.0, 0.0));
  auto factor = [&](std::size_t j) {
    return j == skip ? Complex(1.0, 0.0) : xs[j - 1](static_cast<Eigen::Index>(s[j - 1]), static_cast<Eigen::Index>(s[j]));
  };
  for (std::size_t j = 1; j <= n; ++j) prefix[j] = prefix[j - 1] * factor(j);
  for (;;) {
    visit(s, prefix[n]);
    std::size_t d = n;
    while (true) {
      if (++s[d] < N) break;
      s[d] = 0;
      if (d == 0) return;
      --d;
    }
    for (std::size_t j = std::max<std::size_t>(d, 1); j <= n; ++j) prefix[j] = prefix[j - 1] * factor(j);
  }
}

void check_inputs(const DiscreteSymbol& phi, const std::vector<DenseMatrix>& xs) {
  if (xs.size() != static_cast<std::size_t>(phi.arity())) {
    throw Error(ErrorCode::DimensionMismatch, "schur_multiply: arity does not match the number of matrices");
  }
  const auto N = static_cast<Eigen::Index>(phi.dim());
  for (const auto& x : xs) {
    if (x.rows() != N || x.cols() != N) throw Error(ErrorCode::DimensionMismatch, "schur_multiply: matrix size differs from the index set");
  }
}

}  // namespace

double schatten_norm(const DenseMatrix& x, double p) {
  check_exponent(p);
  const Eigen::VectorXd s = singular_values(x);
  if (s.size() == 0) return 0.0;
  const double top = s.maxCoeff();
  if (std::isinf(p) || top == 0.0) return top;
  double acc = 0.0;
  for (double v : s) acc += std::pow(v / top, p);
  return top * std::pow(acc, 1.0 / p);
}

DenseMatrix dual_element(const DenseMatrix& x, double p) {
  check_exponent(p);
  Eigen::BDCSVD<DenseMatrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  DenseMatrix out = DenseMatrix::Zero(x.rows(), x.cols());
  if (s.size() == 0 || s(0) == 0.0) return out;
  const double top = s(0);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(s.size());
  if (std::isinf(p)) {
    w(0) = 1.0;
  } else if (p == 1.0) {
    for (Eigen::Index i = 0; i < s.size(); ++i) w(i) = s(i) > 1e-14 * top ? 1.0 : 0.0;
  } else {
    double norm = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      w(i) = std::pow(s(i) / top, p - 1.0);
      norm += std::pow(s(i) / top, p);
    }
    w /= std::pow(norm, (p - 1.0) / p);
  }
  return svd.matrixU() * w.asDiagonal() * svd.matrixV().adjoint();
}

DiscreteSymbol DiscreteSymbol::tabulate(int arity, std::vector<long> index_set, const Generator& gen) {
  if (arity < 1 || index_set.empty()) throw Error(ErrorCode::InvalidArgument, "symbol: need arity >= 1 and a nonempty index set");
  std::sort(index_set.begin(), index_set.end());
  DiscreteSymbol phi;
  phi.arity_ = arity;
  phi.index_set_ = std::move(index_set);
  const std::size_t N = phi.index_set_.size();
  const std::size_t inner = ipow(N, arity);
  phi.values_.resize(N * inner);
  parallel_for(N, [&](std::size_t s0) {
    std::vector<std::size_t> s(static_cast<std::size_t>(arity) + 1, 0);
    s[0] = s0;
    for (std::size_t r = 0; r < inner; ++r) {
      std::size_t rem = r;
      for (std::size_t d = s.size() - 1; d >= 1; --d) {
        s[d] = rem % N;
        rem /= N;
      }
      phi.values_[s0 * inner + r] = gen(s);
    }
  });
  return phi;
}

DiscreteSymbol DiscreteSymbol::constant(int arity, std::vector<long> index_set, Complex c) {
  if (arity < 1 || index_set.empty()) throw Error(ErrorCode::InvalidArgument, "symbol: need arity >= 1 and a nonempty index set");
  std::sort(index_set.begin(), index_set.end());
  DiscreteSymbol phi;
  phi.arity_ = arity;
  phi.index_set_ = std::move(index_set);
  phi.constant_ = c;
  return phi;
}

Complex DiscreteSymbol::operator()(std::span<const std::size_t> positions) const {
  if (is_constant()) return constant_;
  std::size_t flat = 0;
  for (std::size_t p : positions) flat = flat * dim() + p;
  return values_[flat];
}

double DiscreteSymbol::sup_norm() const {
  if (is_constant()) return std::abs(constant_);
  double m = 0.0;
  for (const Complex& v : values_) m = std::max(m, std::abs(v));
  return m;
}

DenseMatrix schur_multiply(const DiscreteSymbol& phi, const std::vector<DenseMatrix>& xs) {
  check_inputs(phi, xs);
  const std::size_t N = phi.dim();
  if (phi.is_constant()) {
    DenseMatrix out = xs[0];
    for (std::size_t j = 1; j < xs.size(); ++j) out = out * xs[j];
    return phi.constant_value() * out;
  }
  DenseMatrix out = DenseMatrix::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  const auto& vals = phi.values();
  std::size_t flat = 0;
  const std::size_t n = xs.size();
  for_each_chain(N, xs, n + 1, [&](const std::vector<std::size_t>& s, Complex w) {
    out(static_cast<Eigen::Index>(s[0]), static_cast<Eigen::Index>(s[n])) += vals[flat++] * w;
  });
  return out;
}

DenseMatrix slot_adjoint(const DiscreteSymbol& phi, const std::vector<DenseMatrix>& xs, std::size_t slot,
                         const DenseMatrix& g) {
  check_inputs(phi, xs);
  if (slot >= xs.size()) throw Error(ErrorCode::IndexOutOfRange, "slot_adjoint: slot out of range");
  const std::size_t N = phi.dim();
  const std::size_t n = xs.size();
  if (phi.is_constant()) {
    // T(x) = c A x_slot B with A, B the neighbouring products.
    DenseMatrix A = DenseMatrix::Identity(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    DenseMatrix B = A;
    for (std::size_t j = 0; j < slot; ++j) A = A * xs[j];
    for (std::size_t j = slot + 1; j < n; ++j) B = B * xs[j];
    return std::conj(phi.constant_value()) * A.adjoint() * g * B.adjoint();
  }
  DenseMatrix c = DenseMatrix::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  const auto& vals = phi.values();
  std::size_t flat = 0;
  for_each_chain(N, xs, slot + 1, [&](const std::vector<std::size_t>& s, Complex w) {
    c(static_cast<Eigen::Index>(s[slot]), static_cast<Eigen::Index>(s[slot + 1])) +=
        vals[flat++] * w * std::conj(g(static_cast<Eigen::Index>(s[0]), static_cast<Eigen::Index>(s[n])));
  });
  return c.conjugate();
}

DenseMatrix truncate(const DenseMatrix& x, Truncation kind) {
  DenseMatrix out = DenseMatrix::Zero(x.rows(), x.cols());
  for (Eigen::Index s = 0; s < x.rows(); ++s) {
    for (Eigen::Index t = 0; t < x.cols(); ++t) {
      const bool keep = kind == Truncation::Upper ? s < t : kind == Truncation::Lower ? s > t : s == t;
      if (keep) out(s, t) = x(s, t);
    }
  }
  return out;
}

DiscreteSymbol truncation_symbol(Truncation kind, std::vector<long> index_set) {
  return DiscreteSymbol::tabulate(1, std::move(index_set), [kind](std::span<const std::size_t> s) {
    const bool keep = kind == Truncation::Upper ? s[0] < s[1] : kind == Truncation::Lower ? s[0] > s[1] : s[0] == s[1];
    return Complex(keep ? 1.0 : 0.0, 0.0);
  });
}

DiscreteSymbol lattice_symbol(int variant, double q, int k, int l, int n, std::vector<long> index_set) {
  if (!(q > 0.0 && q < 1.0) || k < 0 || l < 0) throw Error(ErrorCode::InvalidArgument, "lattice symbol: need q in (0,1), k, l >= 0");
  if (variant != 1 && variant != 2) throw Error(ErrorCode::InvalidArgument, "lattice symbol: variant must be 1 or 2");
  if (n < 1 || (variant == 2 && n < 2)) throw Error(ErrorCode::InvalidArgument, "lattice symbol: arity too small");
  std::sort(index_set.begin(), index_set.end());
  const std::vector<long> F = index_set;
  return DiscreteSymbol::tabulate(n, std::move(index_set), [=](std::span<const std::size_t> s) {
    std::vector<double> t(static_cast<std::size_t>(n) + 1);
    for (std::size_t j = 0; j <= static_cast<std::size_t>(n); ++j) {
      const double i = static_cast<double>(F[s[j]]);
      const bool outer = variant == 1 ? (j == 0 || j == static_cast<std::size_t>(n)) : j <= 2;
      t[j] = std::pow(q, (outer ? k : l) * i);
    }
    if (variant == 1) {
      t[static_cast<std::size_t>(n)] = -t[static_cast<std::size_t>(n)];
    } else {
      t[1] = -t[1];
    }
    return Complex(abs_power_symbol(n, t), 0.0);
  });
}

DiscreteSymbol sampled_symbol(const SmoothFunction& f, const std::vector<double>& grid, int n, DivDiffScale scale) {
  std::vector<long> positions(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) positions[i] = static_cast<long>(i);
  return DiscreteSymbol::tabulate(n, std::move(positions), [&](std::span<const std::size_t> s) {
    std::vector<double> t;
    for (std::size_t j : s) t.push_back(grid[j]);
    return Complex(divdiff_eval(f, NodeVector::from_values(t), scale), 0.0);
  });
}

nlohmann::json matrix_to_json(const DenseMatrix& x) {
  std::vector<double> re, im;
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      re.push_back(x(r, c).real());
      im.push_back(x(r, c).imag());
    }
  }
  return {{"rows", x.rows()}, {"cols", x.cols()}, {"re", re}, {"im", im}};
}

DenseMatrix matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  if (re.size() != static_cast<std::size_t>(rows * cols) || im.size() != re.size()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix json: entry count mismatch");
  }
  DenseMatrix x(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto i = static_cast<std::size_t>(r * cols + c);
      x(r, c) = Complex(re[i], im[i]);
    }
  }
  return x;
}

nlohmann::json symbol_to_json(const DiscreteSymbol& phi) {
  nlohmann::json j = {{"arity", phi.arity()}, {"index_set", phi.index_set()}};
  if (phi.is_constant()) {
    j["constant"] = {phi.constant_value().real(), phi.constant_value().imag()};
    return j;
  }
  std::vector<double> re, im;
  for (const Complex& v : phi.values()) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  j["re"] = re;
  j["im"] = im;
  return j;
}

DiscreteSymbol symbol_from_json(const nlohmann::json& j) {
  const int arity = j.at("arity").get<int>();
  auto F = j.at("index_set").get<std::vector<long>>();
  if (j.contains("constant")) {
    const auto c = j.at("constant").get<std::vector<double>>();
    return DiscreteSymbol::constant(arity, std::move(F), Complex(c.at(0), c.at(1)));
  }
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  const std::size_t N = F.size();
  if (re.size() != ipow(N, arity + 1) || im.size() != re.size()) {
    throw Error(ErrorCode::DimensionMismatch, "symbol json: value count mismatch");
  }
  return DiscreteSymbol::tabulate(arity, std::move(F), [&](std::span<const std::size_t> s) {
    std::size_t flat = 0;
    for (std::size_t p : s) flat = flat * N + p;
    return Complex(re[flat], im[flat]);
  });
}

}  // namespace schurlab

#pragma once

// Brute-force ground truth: explicit Gram matrices of the ensemble states and a
// cyclic Jacobi eigensolver.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "qsc/errors.hpp"
#include "qsc/exact.hpp"
#include "qsc/spectra.hpp"

namespace qsc {

/// Dense row-major square matrix of doubles.
struct Matrix {
  std::size_t n = 0;
  std::vector<double> a;

  Matrix() = default;
  explicit Matrix(std::size_t dim, double fill = 0.0) : n(dim), a(dim * dim, fill) {}

  static Matrix identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }

  double trace() const {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += (*this)(i, i);
    return s;
  }

  double frobenius() const {
    double s = 0;
    for (double x : a) s += x * x;
    return std::sqrt(s);
  }
};

inline Matrix operator*(const Matrix& x, const Matrix& y) {
  if (x.n != y.n) throw ContractError("matrix dimension mismatch");
  Matrix r(x.n);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t k = 0; k < x.n; ++k) {
      const double xik = x(i, k);
      if (xik == 0.0) continue;
      for (std::size_t j = 0; j < x.n; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

/// Gram matrix G(i,j) = <psi_i|psi_j>^t stored by association-scheme level:
/// every entry is one of a few distinct values, indexed by level_of(i,j).
template <class Level>
struct GramMatrix {
  std::size_t dim = 0;
  Rational prefactor;               // 1/N for the equiprobable ensemble
  std::vector<Level> levels;        // distinct entry values; levels[0] is the diagonal (1)
  std::vector<std::uint16_t> index;  // dim*dim level indices

  const Level& entry(std::size_t i, std::size_t j) const { return levels[index[i * dim + j]]; }
  std::size_t level_of(std::size_t i, std::size_t j) const { return index[i * dim + j]; }

  /// The unit-diagonal Gram as doubles.
  Matrix dense() const {
    Matrix m(dim);
    std::vector<double> lv;
    for (const auto& l : levels) lv.push_back(to_double(l));
    for (std::size_t i = 0; i < dim * dim; ++i) m.a[i] = lv[index[i]];
    return m;
  }

  /// prefactor * G, which shares its nonzero spectrum with rho^B.
  Matrix scaled_dense() const {
    Matrix m(dim);
    std::vector<double> lv;
    for (const auto& l : levels) lv.push_back(to_double(Rational(prefactor * scalar_to_rational(l))));
    for (std::size_t i = 0; i < dim * dim; ++i) m.a[i] = lv[index[i]];
    return m;
  }

 private:
  static Rational scalar_to_rational(const Rational& q) { return q; }
  static Rational scalar_to_rational(double x) { return Rational(x); }
};

namespace detail {

constexpr std::size_t kMaxGramDim = std::size_t{1} << 14;

inline std::vector<std::uint16_t> hamming_levels(unsigned d) {
  const std::size_t dim = std::size_t{1} << d;
  std::vector<std::uint16_t> idx(dim * dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      idx[i * dim + j] = static_cast<std::uint16_t>(__builtin_popcountll(i ^ j));
  return idx;
}

}  // namespace detail

/// Size-k subsets of [n] as bitmasks, in colexicographic order (which is
/// increasing numeric order of the mask).
inline std::vector<std::uint64_t> k_subsets(unsigned n, unsigned k) {
  if (n > 64 || k > n) throw DomainError("k_subsets needs k <= n <= 64");
  std::vector<std::uint64_t> out;
  if (k == 0) return {0};
  // Gosper's hack; 128-bit so that n = 64 does not overflow.
  using U = unsigned __int128;
  U s = (U{1} << k) - 1;
  const U limit = U{1} << n;
  while (s < limit) {
    out.push_back(static_cast<std::uint64_t>(s));
    const U c = s & (~s + 1);
    const U r = s + c;
    s = (((r ^ s) >> 2) / c) | r;
  }
  return out;
}

/// PAC ensemble: <psi_a|psi_b> = 1 - (4 eps/d) ham(a,b).
inline GramMatrix<Rational> gram_pac(unsigned d, const Rational& eps, unsigned t) {
  detail::check_pac_like(d, eps, t);
  if (d > 12) throw ResourceError("gram_pac supports d <= 12");
  GramMatrix<Rational> g;
  g.dim = std::size_t{1} << d;
  g.prefactor = make_rational(BigInt(1), pow_big(BigInt(2), d));
  for (unsigned h = 0; h <= d; ++h) g.levels.push_back(pow_rational(1 - 4 * eps * h / d, t));
  g.index = detail::hamming_levels(d);
  return g;
}

/// Agnostic ensemble: <psi_a|psi_b> = 1 - (2 alpha/d) ham(a,b).
inline GramMatrix<double> gram_agnostic(unsigned d, const Rational& eps, unsigned t) {
  detail::check_pac_like(d, eps, t);
  if (d > 12) throw ResourceError("gram_agnostic supports d <= 12");
  const double alpha = agnostic_alpha(to_double(eps));
  GramMatrix<double> g;
  g.dim = std::size_t{1} << d;
  g.prefactor = make_rational(BigInt(1), pow_big(BigInt(2), d));
  for (unsigned h = 0; h <= d; ++h) g.levels.push_back(std::pow(1.0 - 2.0 * alpha * h / d, t));
  g.index = detail::hamming_levels(d);
  return g;
}

/// Coupon ensemble: <psi_S|psi_S'> = |S n S'|/k; rows in colex subset order.
inline GramMatrix<Rational> gram_coupon(unsigned n, unsigned k, unsigned t) {
  if (!(1 < k && k < n)) throw DomainError("coupon parameters need 1 < k < n");
  if (t < 1) throw DomainError("t must be >= 1");
  if (n > 64 || binom_exact(n, k) > BigInt(static_cast<unsigned long>(detail::kMaxGramDim)))
    throw ResourceError("gram_coupon supports C(n,k) <= 2^14");
  const auto sets = k_subsets(n, k);
  GramMatrix<Rational> g;
  g.dim = sets.size();
  g.prefactor = make_rational(BigInt(1), BigInt(static_cast<unsigned long>(g.dim)));
  // Level i holds overlap k - i, so the diagonal is level 0.
  for (unsigned i = 0; i <= k; ++i) g.levels.push_back(pow_rational(make_rational(k - i, k), t));
  g.index.resize(g.dim * g.dim);
  for (std::size_t i = 0; i < g.dim; ++i)
    for (std::size_t j = 0; j < g.dim; ++j)
      g.index[i * g.dim + j] = static_cast<std::uint16_t>(k - __builtin_popcountll(sets[i] & sets[j]));
  return g;
}

struct EigenSystem {
  std::vector<double> values;  // descending
  Matrix vectors;              // column j is the eigenvector of values[j]
  int sweeps = 0;
};

namespace detail {

inline void require_symmetric(const Matrix& m) {
  const double scale = std::max(1.0, m.frobenius());
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = i + 1; j < m.n; ++j)
      if (std::fabs(m(i, j) - m(j, i)) > 1e-14 * scale)
        throw DomainError("eig_sym requires a symmetric matrix");
}

inline double off_diagonal_norm(const Matrix& m) {
  double s = 0;
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j)
      if (i != j) s += m(i, j) * m(i, j);
  return std::sqrt(s);
}

}  // namespace detail

/// Cyclic Jacobi. Sweeps run in fixed row-major pair order until the
/// off-diagonal Frobenius norm drops below 1e-13 * dim * max(1, ||A||_F).
inline EigenSystem eig_sym_full(Matrix m, bool want_vectors = true) {
  detail::require_symmetric(m);
  const std::size_t n = m.n;
  if (n > detail::kMaxGramDim) throw ResourceError("eig_sym supports dim <= 2^14");
  EigenSystem es;
  Matrix v = want_vectors ? Matrix::identity(n) : Matrix();
  const double tol = 1e-13 * static_cast<double>(n) * std::max(1.0, m.frobenius());
  constexpr int kMaxSweeps = 100;
  while (detail::off_diagonal_norm(m) >= tol) {
    if (es.sweeps++ >= kMaxSweeps) throw ResourceError("Jacobi iteration did not converge");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double app = m(p, p), aqq = m(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double tn = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(tn * tn + 1.0);
        const double s = tn * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        m(p, q) = m(q, p) = 0.0;
        if (want_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            const double vkp = v(k, p), vkq = v(k, q);
            v(k, p) = c * vkp - s * vkq;
            v(k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return m(x, x) > m(y, y); });
  es.values.resize(n);
  if (want_vectors) es.vectors = Matrix(n);
  for (std::size_t j = 0; j < n; ++j) {
    es.values[j] = m(order[j], order[j]);
    if (want_vectors)
      for (std::size_t k = 0; k < n; ++k) es.vectors(k, j) = v(k, order[j]);
  }
  return es;
}

/// Eigenvalues only, sorted descending.
inline std::vector<double> eig_sym(const Matrix& m) { return eig_sym_full(m, false).values; }

/// f applied to a symmetric matrix through its eigendecomposition.
template <class F>
Matrix matrix_function(const EigenSystem& es, F f) {
  const std::size_t n = es.values.size();
  Matrix r(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double fj = f(es.values[j]);
    if (fj == 0.0) continue;
    for (std::size_t a = 0; a < n; ++a) {
      const double va = es.vectors(a, j) * fj;
      for (std::size_t b = 0; b < n; ++b) r(a, b) += va * es.vectors(b, j);
    }
  }
  return r;
}

/// Eigenvalues at or below this are solver noise around an exact zero.
inline double numerical_zero(const std::vector<double>& values) {
  double top = 0.0;
  for (double v : values) top = std::max(top, std::abs(v));
  return 1e-12 * static_cast<double>(std::max<std::size_t>(1, values.size())) * top;
}

/// Square root of a positive semidefinite matrix; eigenvalues below -tol are
/// rejected, those within numerical_zero of 0 are dropped.
inline Matrix sqrt_psd(const Matrix& m, double tol = 1e-10) {
  const auto es = eig_sym_full(m);
  if (!es.values.empty() && es.values.back() < -tol) throw DomainError("matrix is not positive semidefinite");
  const double zero = numerical_zero(es.values);
  return matrix_function(es, [zero](double x) { return x > zero ? std::sqrt(x) : 0.0; });
}

struct MatchReport {
  bool match = true;
  double max_abs = 0.0;
  double max_rel = 0.0;
  std::size_t witness = 0;  // position of the largest deviation
  double spectrum_value = 0.0;
  double oracle_value = 0.0;
};

/// Expands a spectrum into a descending multiset padded with zeros to the
/// oracle dimension and compares positionally.
template <class Scalar>
MatchReport spectrum_match(const Spectrum<Scalar>& spec, std::vector<double> oracle_eigs, double rel_tol) {
  const BigInt total = spec.total_multiplicity();
  if (total > BigInt(static_cast<unsigned long>(oracle_eigs.size())))
    throw ContractError("spectrum multiplicities exceed oracle dimension");
  std::vector<double> expanded;
  expanded.reserve(oracle_eigs.size());
  for (const auto& e : spec.entries) {
    const double v = to_double(e.eigenvalue);
    expanded.insert(expanded.end(), e.multiplicity.get_ui(), v);
  }
  expanded.resize(oracle_eigs.size(), 0.0);
  std::sort(expanded.begin(), expanded.end(), std::greater<>());
  std::sort(oracle_eigs.begin(), oracle_eigs.end(), std::greater<>());
  MatchReport rep;
  double worst_ratio = -1.0;
  for (std::size_t i = 0; i < expanded.size(); ++i) {
    const double dev = std::fabs(expanded[i] - oracle_eigs[i]);
    const double scale = std::max(1.0, std::fabs(expanded[i]));
    rep.max_abs = std::max(rep.max_abs, dev);
    if (expanded[i] != 0.0) rep.max_rel = std::max(rep.max_rel, dev / std::fabs(expanded[i]));
    if (dev / scale > worst_ratio) {
      worst_ratio = dev / scale;
      rep.witness = i;
      rep.spectrum_value = expanded[i];
      rep.oracle_value = oracle_eigs[i];
    }
    if (dev > rel_tol * scale) rep.match = false;
  }
  return rep;
}

}  // namespace qsc

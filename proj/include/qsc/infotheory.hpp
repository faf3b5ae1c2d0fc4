#pragma once

// Entropy and distinguishability functionals over spectra and Gram matrices.
// All entropies in bits.

#include <cmath>
#include <numeric>
#include <vector>

#include "qsc/combinatorics.hpp"
#include "qsc/errors.hpp"
#include "qsc/exact.hpp"
#include "qsc/log_real.hpp"
#include "qsc/oracle.hpp"
#include "qsc/spectra.hpp"

namespace qsc {

namespace detail {

inline double log2_of(const Rational& q) { return log2_rational(q); }
inline double log2_of(double x) { return std::log2(x); }

}  // namespace detail

/// -sum mult * lambda * log2(lambda) over the nonzero eigenvalues.
template <class Scalar>
double spectrum_entropy(const Spectrum<Scalar>& spec) {
  double h = 0.0;
  for (const auto& e : spec.entries) {
    if (e.eigenvalue <= 0) continue;
    const double l2 = detail::log2_of(e.eigenvalue);
    // mult * lambda may be far outside double range on its own factors.
    const double weight = std::exp2(log2_big(e.multiplicity) + l2);
    h -= weight * l2;
  }
  return h;
}

/// log2 of the number of nonzero eigenvalues counted with multiplicity.
template <class Scalar>
double log2_rank(const Spectrum<Scalar>& spec) {
  BigInt r = 0;
  for (const auto& e : spec.entries)
    if (e.eigenvalue > 0) r += e.multiplicity;
  return r == 0 ? 0.0 : log2_big(r);
}

struct PacEntropyDecomposition {
  double entropy = 0.0;        // S(B)
  double mu_entropy = 0.0;     // H(mu), mu_h = C(d,h) lambda_h
  double s_td = 0.0;           // sum mu_h log2 C(d,h)
  double log2_d_plus_1 = 0.0;
  Rational mu_total_exact;     // exact tower only
  bool chain_holds = true;     // S(B) <= log2(d+1) + S_td
};

template <class Scalar>
PacEntropyDecomposition entropy_decomposition(const Spectrum<Scalar>& spec, unsigned d) {
  PacEntropyDecomposition out;
  out.log2_d_plus_1 = std::log2(static_cast<double>(d) + 1.0);
  Rational total = 0;
  for (unsigned h = 0; h < spec.entries.size(); ++h) {
    const auto& e = spec.entries[h];
    if constexpr (std::is_same_v<Scalar, Rational>) total += Rational(e.multiplicity) * e.eigenvalue;
    if (e.eigenvalue <= 0) continue;
    const double log_mult = log2_big(e.multiplicity);
    const double log_mu = log_mult + detail::log2_of(e.eigenvalue);
    const double mu = std::exp2(log_mu);
    out.mu_entropy -= mu * log_mu;
    out.s_td += mu * log_mult;
  }
  out.entropy = spectrum_entropy(spec);
  out.mu_total_exact = total;
  out.chain_holds = out.entropy <= out.log2_d_plus_1 + out.s_td + 1e-12 * std::max(1.0, out.entropy);
  return out;
}

inline PacEntropyDecomposition entropy_decomposition_pac(unsigned d, const Rational& eps, unsigned t) {
  return entropy_decomposition(pac_spectrum_exact(d, eps, t), d);
}

/// Optimal success for two equiprobable pure states, t copies.
inline double helstrom_pair(double overlap, unsigned t) {
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw DomainError("overlap must lie in [0, 1]");
  if (t < 1) throw DomainError("t must be >= 1");
  return 0.5 + 0.5 * std::sqrt(1.0 - std::pow(overlap, 2.0 * t));
}

/// N^{-1/2} sum mult * sqrt(lambda) for an equiprobable pure-state ensemble of size N.
template <class Scalar>
double hc_quantity(const Spectrum<Scalar>& spec, const BigInt& ensemble_size) {
  if (ensemble_size < 1) throw DomainError("ensemble size must be positive");
  const double half_log_n = 0.5 * log2_big(ensemble_size);
  double acc = 0.0;
  for (const auto& e : spec.entries) {
    if (e.eigenvalue <= 0) continue;
    acc += std::exp2(log2_big(e.multiplicity) + 0.5 * detail::log2_of(e.eigenvalue) - half_log_n);
  }
  return acc;
}

/// HC through the oracle: N^{-1/2} Tr sqrt(G/N).
template <class Level>
double hc_from_gram(const GramMatrix<Level>& g) {
  const auto ev = eig_sym(g.scaled_dense());
  const double zero = numerical_zero(ev);
  double tr = 0.0;
  for (double x : ev) {
    if (x < -1e-10) throw DomainError("Gram matrix is not positive semidefinite");
    if (x > zero) tr += std::sqrt(x);
  }
  return tr / std::sqrt(static_cast<double>(g.dim));
}

namespace detail {

// Success of the square-root measurement for weights q (sum q = 1), scored
// against uniform priors: (1/N) sum_i ((G_q^{1/2})_ii)^2 / q_i, with
// G_q = diag(sqrt q) G diag(sqrt q).
inline std::vector<double> srm_contributions(const Matrix& unit_gram, const std::vector<double>& q) {
  const std::size_t n = unit_gram.n;
  Matrix gq(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gq(i, j) = std::sqrt(q[i] * q[j]) * unit_gram(i, j);
  const Matrix r = sqrt_psd(gq);
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = r(i, i) * r(i, i) / (q[i] * static_cast<double>(n));
  return c;
}

}  // namespace detail

/// Pretty good measurement success: (1/N) sum_i ((G^{1/2})_ii)^2, G unit-diagonal.
template <class Level>
double pgm_success(const GramMatrix<Level>& g) {
  if (g.dim > (std::size_t{1} << 12)) throw ResourceError("pgm_success supports dim <= 2^12");
  const Matrix r = sqrt_psd(g.dense());
  double acc = 0.0;
  for (std::size_t i = 0; i < g.dim; ++i) acc += r(i, i) * r(i, i);
  return acc / static_cast<double>(g.dim);
}

struct OptimalResult {
  double success = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;  // success after each accepted iterate
};

/// Reweighted square-root-measurement iteration. Every iterate is the success
/// of an actual measurement (so it never exceeds the optimum); a step is kept
/// only if it does not decrease the success, giving monotone iterates.
template <class Level>
OptimalResult optimal_success_iterative(const GramMatrix<Level>& g, int max_iters = 10000, double tol = 1e-9) {
  if (g.dim > (std::size_t{1} << 10)) throw ResourceError("optimal_success_iterative supports dim <= 2^10");
  const Matrix unit = g.dense();
  const std::size_t n = g.dim;
  std::vector<double> q(n, 1.0 / static_cast<double>(n));
  auto contrib = detail::srm_contributions(unit, q);
  double best = std::accumulate(contrib.begin(), contrib.end(), 0.0);
  OptimalResult res;
  res.history.push_back(best);
  while (res.iterations < max_iters) {
    ++res.iterations;
    // Shift weight toward states that are currently recognised more often.
    std::vector<double> next(n);
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += (next[i] = q[i] * contrib[i]);
    if (norm <= 0.0) break;
    for (auto& x : next) x /= norm;
    const auto c2 = detail::srm_contributions(unit, next);
    const double s2 = std::accumulate(c2.begin(), c2.end(), 0.0);
    if (s2 < best) {
      res.converged = true;
      break;
    }
    const double gain = s2 - best;
    q = std::move(next);
    contrib = c2;
    best = s2;
    res.history.push_back(best);
    if (gain < tol) {
      res.converged = true;
      break;
    }
  }
  res.success = best;
  return res;
}

/// h(err) + err * log2(alphabet - 1).
inline double fano_bound(double err, unsigned long alphabet) {
  if (!(err >= 0.0 && err <= 1.0)) throw DomainError("fano_bound requires err in [0, 1]");
  if (alphabet < 2) throw DomainError("fano_bound requires alphabet >= 2");
  const double tail = err == 0.0 ? 0.0 : err * std::log2(static_cast<double>(alphabet - 1));
  return binary_entropy(err) + tail;
}

}  // namespace qsc

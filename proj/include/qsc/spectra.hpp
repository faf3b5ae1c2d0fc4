#pragma once

// Spectra of the ensemble-average state rho^B for the PAC, agnostic and
// coupon-collector ensembles.
//
// Two towers: Spectrum<Rational> (exact) and Spectrum<double> (float; sums of
// large-count terms go through LogReal).

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "qsc/combinatorics.hpp"
#include "qsc/errors.hpp"
#include "qsc/exact.hpp"
#include "qsc/log_real.hpp"

namespace qsc {

struct PacParams {
  unsigned d = 1;
  Rational eps = make_rational(1, 8);
  unsigned t = 1;
};

struct AgnosticParams {
  unsigned d = 1;
  Rational eps = make_rational(1, 8);
  unsigned t = 1;
};

struct CouponParams {
  unsigned n = 3;
  unsigned k = 2;
  unsigned t = 1;
  unsigned m() const { return n - k; }
};

using EnsembleParams = std::variant<PacParams, AgnosticParams, CouponParams>;

enum class Tower { exact, floating };

inline std::string to_string(Tower t) { return t == Tower::exact ? "exact" : "float"; }

template <class Scalar>
struct SpectrumEntry {
  Scalar eigenvalue;
  BigInt multiplicity;
};

template <class Scalar>
struct Spectrum {
  EnsembleParams params;
  std::vector<SpectrumEntry<Scalar>> entries;

  static constexpr Tower tower() {
    return std::is_same_v<Scalar, Rational> ? Tower::exact : Tower::floating;
  }

  // Sum of multiplicity * eigenvalue.
  Scalar trace() const {
    Scalar acc = 0;
    for (const auto& e : entries) {
      if constexpr (std::is_same_v<Scalar, Rational>) {
        acc += Rational(e.multiplicity) * e.eigenvalue;
      } else {
        if (e.eigenvalue != 0) acc += (LogReal(e.multiplicity) * LogReal(e.eigenvalue)).to_double();
      }
    }
    return acc;
  }

  BigInt total_multiplicity() const {
    BigInt acc = 0;
    for (const auto& e : entries) acc += e.multiplicity;
    return acc;
  }

  std::size_t distinct_nonzero() const {
    std::vector<Scalar> vals;
    for (const auto& e : entries)
      if (e.eigenvalue != 0) vals.push_back(e.eigenvalue);
    std::sort(vals.begin(), vals.end());
    return static_cast<std::size_t>(std::unique(vals.begin(), vals.end()) - vals.begin());
  }
};

namespace detail {

inline void check_eps(const Rational& eps) {
  if (!(eps > 0 && eps < make_rational(1, 4))) throw DomainError("eps must lie in (0, 1/4)");
}

inline void check_pac_like(unsigned d, const Rational& eps, unsigned t) {
  if (d < 1) throw DomainError("d must be >= 1");
  if (t < 1) throw DomainError("t must be >= 1");
  check_eps(eps);
}

}  // namespace detail

/// alpha = (1 - sqrt(1 - 16 eps^2)) / 2, evaluated without cancellation.
inline double agnostic_alpha(double eps) {
  const double e2 = eps * eps;
  return 8.0 * e2 / (1.0 + std::sqrt(1.0 - 16.0 * e2));
}

/// PAC spectrum, exact tower.
inline Spectrum<Rational> pac_spectrum_exact(unsigned d, const Rational& eps, unsigned t) {
  detail::check_pac_like(d, eps, t);
  const auto counts = parity_counts(d, t);
  const Rational a = 2 * eps / d;
  const Rational b = 1 - 2 * eps;
  Spectrum<Rational> out{PacParams{d, eps, t}, {}};
  for (unsigned h = 0; h <= d; ++h) {
    Rational lam = 0;
    for (unsigned l = h; l <= t; l += 2) {
      if (counts(l, h) == 0) continue;
      lam += Rational(binom_exact(t, l) * counts(l, h)) * pow_rational(a, l) * pow_rational(b, t - l);
    }
    out.entries.push_back({lam, binom_exact(d, h)});
  }
  return out;
}

/// PAC spectrum, float tower (terms summed as LogReal).
inline Spectrum<double> pac_spectrum_float(unsigned d, const Rational& eps, unsigned t) {
  detail::check_pac_like(d, eps, t);
  const auto counts = parity_counts(d, t);
  const double e = to_double(eps);
  const LogReal a(2.0 * e / d);
  const LogReal b(1.0 - 2.0 * e);
  Spectrum<double> out{PacParams{d, eps, t}, {}};
  for (unsigned h = 0; h <= d; ++h) {
    LogReal lam;
    for (unsigned l = h; l <= t; l += 2) {
      if (counts(l, h) == 0) continue;
      lam += log2_binom(t, l) * LogReal(counts(l, h)) * a.pow(l) * b.pow(t - l);
    }
    out.entries.push_back({lam.to_double(), binom_exact(d, h)});
  }
  return out;
}

/// Agnostic spectrum; float only since alpha is irrational.
inline Spectrum<double> agnostic_spectrum(unsigned d, const Rational& eps, unsigned t) {
  detail::check_pac_like(d, eps, t);
  const auto counts = parity_counts(d, t);
  const double alpha = agnostic_alpha(to_double(eps));
  const LogReal la(alpha);
  const LogReal lb(1.0 - alpha);
  const LogReal ld(static_cast<double>(d));
  Spectrum<double> out{AgnosticParams{d, eps, t}, {}};
  for (unsigned h = 0; h <= d; ++h) {
    LogReal lam;
    for (unsigned r = h; r <= t; r += 2) {
      if (counts(r, h) == 0) continue;
      lam += log2_binom(t, r) * LogReal(counts(r, h)) / ld.pow(r) * la.pow(r) * lb.pow(t - r);
    }
    out.entries.push_back({lam.to_double(), binom_exact(d, h)});
  }
  return out;
}

struct CouponStepProbs {
  unsigned j = 0;
  Rational p_minus;
  Rational p_zero;
  Rational p_plus;
};

/// Transition coefficients p_{j,-1}, p_{j,0}, p_{j,+1} of the coupon walk.
inline CouponStepProbs coupon_step_probs(unsigned n, unsigned k, unsigned j) {
  if (!(1 < k && k < n)) throw DomainError("coupon parameters need 1 < k < n");
  const long m = static_cast<long>(n) - static_cast<long>(k);
  if (static_cast<long>(k) < m) throw UnsupportedRegimeError("coupon walk requires k >= m");
  if (static_cast<long>(j) > m) throw DomainError("coupon step index j must lie in [0, m]");
  const long N = n, K = k, J = j;
  CouponStepProbs p;
  p.j = j;
  p.p_minus = make_rational(BigInt(J) * (K - J + 1) * (m - J + 1),
                            BigInt(N - 2 * J + 1) * (N - 2 * J + 2) * K);
  // At j = n/2 (only when k = m) the remaining terms are 0/0 with a vanishing
  // numerator factor; both are taken as 0.
  Rational zero_extra = 0;
  Rational plus = 0;
  if (N != 2 * J) {
    zero_extra = make_rational(BigInt(J) * (N - J + 1) * (K - m) * (K - m),
                               BigInt(N) * K * (N - 2 * J) * (N - 2 * J + 2));
    plus = make_rational(BigInt(K - J) * (N - J + 1) * (m - J),
                         BigInt(N - 2 * J) * (N - 2 * J + 1) * K);
  }
  p.p_zero = make_rational(K, N) + zero_extra;
  p.p_plus = plus;
  return p;
}

/// Eigenvalues lambda_{s,t}, s = 0..m, for every t = 0..T (row t of the result).
template <class Scalar>
std::vector<std::vector<Scalar>> coupon_lambda_history(unsigned n, unsigned k, unsigned T) {
  if (!(1 < k && k < n)) throw DomainError("coupon parameters need 1 < k < n");
  const unsigned m = n - k;
  if (k < m) throw UnsupportedRegimeError("coupon spectrum requires k >= m");
  std::vector<Scalar> pm(m + 1), pz(m + 1), pp(m + 1);
  for (unsigned j = 0; j <= m; ++j) {
    const auto p = coupon_step_probs(n, k, j);
    pm[j] = scalar_from<Scalar>(p.p_minus);
    pz[j] = scalar_from<Scalar>(p.p_zero);
    pp[j] = scalar_from<Scalar>(p.p_plus);
  }
  std::vector<std::vector<Scalar>> hist;
  hist.reserve(T + 1);
  std::vector<Scalar> cur(m + 1, Scalar(0));
  cur[0] = 1;
  hist.push_back(cur);
  for (unsigned t = 1; t <= T; ++t) {
    std::vector<Scalar> next(m + 1, Scalar(0));
    for (unsigned s = 0; s <= m; ++s) {
      Scalar v = pz[s] * cur[s];
      if (s >= 1) v += pm[s] * cur[s - 1];
      if (s + 1 <= m) v += pp[s] * cur[s + 1];
      next[s] = v;
    }
    cur = std::move(next);
    hist.push_back(cur);
  }
  return hist;
}

template <class Scalar>
Spectrum<Scalar> coupon_spectrum(unsigned n, unsigned k, unsigned t) {
  if (t < 1) throw DomainError("t must be >= 1");
  auto hist = coupon_lambda_history<Scalar>(n, k, t);
  const unsigned m = n - k;
  Spectrum<Scalar> out{CouponParams{n, k, t}, {}};
  for (unsigned s = 0; s <= m; ++s) out.entries.push_back({hist[t][s], johnson_multiplicity(n, s)});
  return out;
}

inline Spectrum<Rational> coupon_spectrum_exact(unsigned n, unsigned k, unsigned t) {
  return coupon_spectrum<Rational>(n, k, t);
}

inline Spectrum<double> coupon_spectrum_float(unsigned n, unsigned k, unsigned t) {
  return coupon_spectrum<double>(n, k, t);
}

template <class Scalar>
Spectrum<double> to_float(const Spectrum<Scalar>& s) {
  Spectrum<double> out{s.params, {}};
  for (const auto& e : s.entries) out.entries.push_back({to_double(e.eigenvalue), e.multiplicity});
  return out;
}

}  // namespace qsc

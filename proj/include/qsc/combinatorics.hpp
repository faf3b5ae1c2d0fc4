#pragma once

// Exact and log-domain combinatorial primitives: binomials, Johnson-scheme
// multiplicities, parity-signature counts, binary entropy and tail bounds.
// Entropies are in bits throughout.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "qsc/errors.hpp"
#include "qsc/exact.hpp"
#include "qsc/log_real.hpp"

namespace qsc {

/// C(n, k); zero outside 0 <= k <= n.
inline BigInt binom_exact(unsigned long n, long k) {
  if (k < 0 || static_cast<unsigned long>(k) > n) return 0;
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, static_cast<unsigned long>(k));
  return r;
}

/// log2 C(n, k) through long-double log-gamma; absolute error well below 1e-9
/// for n up to 10^6.
inline LogReal log2_binom(unsigned long n, unsigned long k) {
  if (k > n) throw DomainError("log2_binom requires 0 <= k <= n");
  if (k == 0 || k == n) return LogReal(1.0);
  const long double ln = std::lgamma(static_cast<long double>(n) + 1.0L) -
                         std::lgamma(static_cast<long double>(k) + 1.0L) -
                         std::lgamma(static_cast<long double>(n - k) + 1.0L);
  return LogReal::from_log2(1, static_cast<double>(ln / std::numbers::ln2_v<long double>));
}

/// log2 C(n, x) for real 0 <= x <= n (used where a bound evaluates a binomial at
/// a non-integer argument, e.g. 3*alpha*t/2).
inline double log2_binom_real(double n, double x) {
  if (x < 0.0 || x > n) throw DomainError("log2_binom_real requires 0 <= x <= n");
  const long double ln = std::lgamma(static_cast<long double>(n) + 1.0L) -
                         std::lgamma(static_cast<long double>(x) + 1.0L) -
                         std::lgamma(static_cast<long double>(n - x) + 1.0L);
  return static_cast<double>(ln / std::numbers::ln2_v<long double>);
}

/// Table n[r][h]: number of strings in [d]^r carrying one fixed parity
/// signature of Hamming weight h.
class ParityCountTable {
 public:
  ParityCountTable(unsigned d, unsigned max_r) : d_(d), max_r_(max_r) {
    if (d == 0) throw DomainError("parity_counts requires d >= 1");
    rows_.assign(max_r + 1, std::vector<BigInt>(d + 1, BigInt(0)));
    rows_[0][0] = 1;
    // Appending one symbol j flips bit j of the signature. A weight-h target is
    // reached from weight h-1 (h choices of j inside its support) or from
    // weight h+1 (d-h choices outside).
    for (unsigned r = 0; r < max_r; ++r) {
      const auto& prev = rows_[r];
      auto& next = rows_[r + 1];
      for (unsigned h = 0; h <= d; ++h) {
        BigInt v = 0;
        if (h >= 1) v += BigInt(h) * prev[h - 1];
        if (h + 1 <= d) v += BigInt(d - h) * prev[h + 1];
        next[h] = std::move(v);
      }
    }
  }

  unsigned d() const { return d_; }
  unsigned max_r() const { return max_r_; }

  const BigInt& operator()(unsigned r, unsigned h) const { return rows_.at(r).at(h); }

 private:
  unsigned d_;
  unsigned max_r_;
  std::vector<std::vector<BigInt>> rows_;
};

inline ParityCountTable parity_counts(unsigned d, unsigned max_r) { return {d, max_r}; }

/// Johnson-scheme eigenspace dimension l_s = C(n,s) - C(n,s-1), l_0 = 1.
inline BigInt johnson_multiplicity(unsigned long n, unsigned long s) {
  if (2 * s > n) throw DomainError("johnson_multiplicity requires s <= n/2");
  if (s == 0) return 1;
  return binom_exact(n, static_cast<long>(s)) - binom_exact(n, static_cast<long>(s) - 1);
}

/// h(x) = -x log2 x - (1-x) log2 (1-x), with h(0) = h(1) = 0.
inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("binary_entropy requires 0 <= x <= 1");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

enum class TailKind { chernoff_mult, binomial_half };

struct TailBound {
  TailKind kind;
  double bound = 0.0;
  // binomial_half only: 2^{-n} sum_{r<=k} C(n,r).
  Rational exact_tail = 0;
  bool holds = true;
};

/// Multiplicative Chernoff: Pr[X >= (1+delta) mu] <= exp(-delta^2 mu / (2+delta)).
inline TailBound chernoff_mult_bound(double delta, double mu) {
  if (!(delta >= 0.0) || !(mu >= 0.0)) throw DomainError("chernoff bound requires delta, mu >= 0");
  return {TailKind::chernoff_mult, std::exp(-delta * delta * mu / (2.0 + delta)), 0, true};
}

/// Lower tail of B(n, 1/2) against 2^{-(1-h(k/n)) n}, for k <= n/2.
inline TailBound binomial_half_bound(unsigned long n, unsigned long k) {
  if (2 * k > n) throw DomainError("binomial_half bound requires k <= n/2");
  BigInt sum = 0;
  for (unsigned long r = 0; r <= k; ++r) sum += binom_exact(n, static_cast<long>(r));
  TailBound out{TailKind::binomial_half, 0.0, make_rational(sum, pow_big(BigInt(2), n)), true};
  const double frac = n == 0 ? 0.0 : static_cast<double>(k) / static_cast<double>(n);
  out.bound = std::exp2(-(1.0 - binary_entropy(frac)) * static_cast<double>(n));
  out.holds = to_double(out.exact_tail) <= out.bound;
  return out;
}

inline TailBound tail_bound(TailKind kind, double a, double b) {
  if (kind == TailKind::chernoff_mult) return chernoff_mult_bound(a, b);
  if (a < 0.0 || b < 0.0 || a != std::floor(a) || b != std::floor(b))
    throw DomainError("binomial_half bound takes integer n, k");
  return binomial_half_bound(static_cast<unsigned long>(a), static_cast<unsigned long>(b));
}

}  // namespace qsc

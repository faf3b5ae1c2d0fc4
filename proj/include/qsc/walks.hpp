#pragma once

// Nearest-neighbour random walks on an integer interval: exact DP, Monte Carlo,
// the shared-uniform coupling, and stochastic-domination checks.
//
// Walks used here:
//   W          coupon walk, steps p_{s,-1}, p_{s,0}, p_{s,+1}
//   Wt(n')     marked-coupon counter, up-step (m - s)/n'
//   W'' - V''  Wt(n) minus an independent Bernoulli(m^2/n^2) counter

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qsc/errors.hpp"
#include "qsc/exact.hpp"
#include "qsc/parallel.hpp"
#include "qsc/rng.hpp"
#include "qsc/spectra.hpp"

namespace qsc {

template <class Scalar>
struct StepProbs {
  Scalar minus;
  Scalar zero;
  Scalar plus;
};

/// step(t, s) gives the transition out of state s at time t (t = 0, 1, ...).
template <class Scalar>
struct WalkSpec {
  long lo = 0;
  long hi = 0;
  long start = 0;
  bool time_dependent = false;
  std::string label;
  std::function<StepProbs<Scalar>(unsigned, long)> step;
};

template <class Scalar>
struct Distribution {
  long offset = 0;
  std::vector<Scalar> probs;

  long lo() const { return offset; }
  long hi() const { return offset + static_cast<long>(probs.size()) - 1; }

  Scalar at(long s) const {
    if (s < lo() || s > hi()) return Scalar(0);
    return probs[static_cast<std::size_t>(s - offset)];
  }

  /// Pr[X >= i].
  Scalar upper_tail(long i) const {
    Scalar acc = 0;
    for (long s = std::max(i, lo()); s <= hi(); ++s) acc += probs[static_cast<std::size_t>(s - offset)];
    return acc;
  }

  Scalar total() const {
    Scalar acc = 0;
    for (const auto& p : probs) acc += p;
    return acc;
  }

  Scalar mean() const {
    Scalar acc = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) acc += probs[i] * Scalar(offset + static_cast<long>(i));
    return acc;
  }
};

/// Wt(n'): counts distinct marked coupons, m marked among n'.
template <class Scalar = Rational>
WalkSpec<Scalar> coupon_walk_spec(unsigned n_prime, unsigned m) {
  if (m < 1) throw DomainError("coupon_walk_spec requires m >= 1");
  if (n_prime < m) throw DomainError("coupon_walk_spec requires n' >= m");
  auto table = std::make_shared<std::vector<StepProbs<Scalar>>>();
  for (unsigned s = 0; s <= m; ++s) {
    const Rational up = make_rational(m - s, n_prime);
    table->push_back({Scalar(0), scalar_from<Scalar>(1 - up), scalar_from<Scalar>(up)});
  }
  WalkSpec<Scalar> w;
  w.lo = 0;
  w.hi = m;
  w.label = "Wt(" + std::to_string(n_prime) + ")";
  w.step = [table](unsigned, long s) { return (*table)[static_cast<std::size_t>(s)]; };
  return w;
}

/// W: the coupon walk on [0, m] driven by coupon_step_probs.
template <class Scalar = Rational>
WalkSpec<Scalar> w_walk_spec(unsigned n, unsigned k) {
  if (!(1 < k && k < n)) throw DomainError("coupon parameters need 1 < k < n");
  const unsigned m = n - k;
  auto table = std::make_shared<std::vector<StepProbs<Scalar>>>();
  for (unsigned j = 0; j <= m; ++j) {
    const auto p = coupon_step_probs(n, k, j);
    table->push_back({scalar_from<Scalar>(p.p_minus), scalar_from<Scalar>(p.p_zero), scalar_from<Scalar>(p.p_plus)});
  }
  WalkSpec<Scalar> w;
  w.lo = 0;
  w.hi = m;
  w.label = "W";
  w.step = [table](unsigned, long s) { return (*table)[static_cast<std::size_t>(s)]; };
  return w;
}

namespace detail {

template <class Scalar>
bool near_one(const Scalar& x) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return x == 1;
  } else {
    return std::fabs(static_cast<double>(x) - 1.0) <= 1e-12;
  }
}

template <class Scalar>
void check_step(const WalkSpec<Scalar>& spec, const StepProbs<Scalar>& p, unsigned t, long s) {
  const bool nonneg = p.minus >= 0 && p.zero >= 0 && p.plus >= 0;
  if (!nonneg || !near_one<Scalar>(p.minus + p.zero + p.plus) || (s == spec.lo && p.minus != 0) ||
      (s == spec.hi && p.plus != 0))
    throw ContractError("walk '" + spec.label + "' has invalid step probabilities at t=" + std::to_string(t) +
                        ", s=" + std::to_string(s));
}

}  // namespace detail

/// Forward DP: distributions at times 0..T over [lo, hi].
template <class Scalar>
std::vector<Distribution<Scalar>> walk_dp(const WalkSpec<Scalar>& spec, unsigned T) {
  if (spec.hi < spec.lo || spec.start < spec.lo || spec.start > spec.hi) throw ContractError("malformed walk interval");
  const std::size_t width = static_cast<std::size_t>(spec.hi - spec.lo + 1);
  std::vector<Distribution<Scalar>> out;
  out.reserve(T + 1);
  Distribution<Scalar> cur{spec.lo, std::vector<Scalar>(width, Scalar(0))};
  cur.probs[static_cast<std::size_t>(spec.start - spec.lo)] = 1;
  out.push_back(cur);
  for (unsigned t = 0; t < T; ++t) {
    Distribution<Scalar> next{spec.lo, std::vector<Scalar>(width, Scalar(0))};
    for (std::size_t i = 0; i < width; ++i) {
      if (cur.probs[i] == 0) continue;
      const long s = spec.lo + static_cast<long>(i);
      const auto p = spec.step(t, s);
      detail::check_step(spec, p, t, s);
      if (p.minus != 0) next.probs[i - 1] += cur.probs[i] * p.minus;
      if (p.zero != 0) next.probs[i] += cur.probs[i] * p.zero;
      if (p.plus != 0) next.probs[i + 1] += cur.probs[i] * p.plus;
    }
    cur = std::move(next);
    out.push_back(cur);
  }
  return out;
}

/// Independent marginal histories of W'' = Wt(n) and V'' up to time T.
template <class Scalar>
struct DiffWalkHistory {
  unsigned n = 0;
  unsigned m = 0;
  Scalar v_step;                                   // m^2 / n^2
  std::vector<Distribution<Scalar>> w;            // W''_t on [0, m]
  std::vector<std::vector<Scalar>> v;             // V''_t pmf, trailing zeros trimmed

  /// Distribution of W''_t - V''_t on [-t, m].
  Distribution<Scalar> difference(unsigned t) const {
    Distribution<Scalar> d{-static_cast<long>(t), std::vector<Scalar>(t + m + 1, Scalar(0))};
    const auto& vt = v[t];
    const auto& wt = w[t].probs;
    for (std::size_t r = 0; r < vt.size(); ++r) {
      if (vt[r] == 0) continue;
      for (unsigned x = 0; x <= m; ++x) {
        if (wt[x] == 0) continue;
        d.probs[static_cast<std::size_t>(static_cast<long>(x) - static_cast<long>(r) + static_cast<long>(t))] +=
            vt[r] * wt[x];
      }
    }
    return d;
  }
};

template <class Scalar>
DiffWalkHistory<Scalar> diff_walk_history(unsigned n, unsigned m, unsigned T) {
  if (m < 1 || n <= m) throw DomainError("diff walk requires 1 <= m < n");
  DiffWalkHistory<Scalar> h;
  h.n = n;
  h.m = m;
  h.v_step = scalar_from<Scalar>(make_rational(static_cast<long>(m) * m, static_cast<long>(n) * n));
  h.w = walk_dp(coupon_walk_spec<Scalar>(n, m), T);
  std::vector<Scalar> cur{Scalar(1)};
  h.v.push_back(cur);
  const Scalar stay = Scalar(1) - h.v_step;
  for (unsigned t = 0; t < T; ++t) {
    std::vector<Scalar> next(cur.size() + 1, Scalar(0));
    for (std::size_t r = 0; r < cur.size(); ++r) {
      next[r] += cur[r] * stay;
      next[r + 1] += cur[r] * h.v_step;
    }
    while (next.size() > 1 && next.back() == 0) next.pop_back();
    cur = std::move(next);
    h.v.push_back(cur);
  }
  return h;
}

/// Distribution of W''_t - V''_t by convolution of the independent marginals.
template <class Scalar = Rational>
Distribution<Scalar> diff_walk_dp(unsigned n, unsigned m, unsigned t) {
  return diff_walk_history<Scalar>(n, m, t).difference(t);
}

/// W'' - V'' as a time-dependent walk on [-T, m]. Its transition out of s at
/// time t averages the joint-state probabilities over the split
/// (W'' = s + r, V'' = r) weighted by the time-t marginals; this Markov
/// projection reproduces the marginal laws of the difference exactly.
template <class Scalar = double>
WalkSpec<Scalar> diff_walk_spec(unsigned n, unsigned m, unsigned T) {
  struct Cache {
    DiffWalkHistory<Scalar> hist;
    std::mutex mu;
    long t = -1;
    // Indexed by s + T: summed weight and weighted step masses at time t.
    std::vector<Scalar> wsum, minus, plus;
  };
  auto cache = std::make_shared<Cache>();
  cache->hist = diff_walk_history<Scalar>(n, m, T);
  WalkSpec<Scalar> w;
  w.lo = -static_cast<long>(T);
  w.hi = m;
  w.time_dependent = true;
  w.label = "W''-V''";
  const Scalar nn = Scalar(static_cast<long>(n));
  const Scalar p = cache->hist.v_step;
  auto joint = [m, nn, p](long x) -> StepProbs<Scalar> {
    const Scalar up_w = Scalar(static_cast<long>(m) - x) / nn;
    const Scalar minus = (Scalar(1) - up_w) * p;
    const Scalar plus = (Scalar(1) - p) * up_w;
    return {minus, Scalar(1) - minus - plus, plus};
  };
  w.step = [cache, joint, m, T](unsigned t, long s) -> StepProbs<Scalar> {
    if (s > static_cast<long>(m)) return {Scalar(0), Scalar(1), Scalar(0)};
    std::lock_guard<std::mutex> lock(cache->mu);
    const auto& hist = cache->hist;
    if (cache->t != static_cast<long>(t)) {
      // All states at once: the split (W'' = x, V'' = r) lands on s = x - r.
      const std::size_t width = static_cast<std::size_t>(T) + m + 1;
      cache->wsum.assign(width, Scalar(0));
      cache->minus.assign(width, Scalar(0));
      cache->plus.assign(width, Scalar(0));
      const auto& vt = hist.v[std::min<std::size_t>(t, hist.v.size() - 1)];
      const auto& wt = hist.w[std::min<std::size_t>(t, hist.w.size() - 1)].probs;
      for (std::size_t r = 0; r < vt.size() && r <= T; ++r) {
        if (vt[r] == 0) continue;
        for (unsigned x = 0; x <= m; ++x) {
          const Scalar weight = vt[r] * wt[x];
          if (weight == 0) continue;
          const auto q = joint(x);
          const std::size_t i = static_cast<std::size_t>(static_cast<long>(x) - static_cast<long>(r) + static_cast<long>(T));
          cache->wsum[i] += weight;
          cache->minus[i] += weight * q.minus;
          cache->plus[i] += weight * q.plus;
        }
      }
      cache->t = t;
    }
    const std::size_t i = static_cast<std::size_t>(s + static_cast<long>(T));
    if (cache->wsum[i] == 0) {
      // Unreachable (or underflowed) state: any split gives a valid law.
      return joint(s + std::max(0L, -s));
    }
    StepProbs<Scalar> out;
    out.minus = cache->minus[i] / cache->wsum[i];
    out.plus = cache->plus[i] / cache->wsum[i];
    out.zero = Scalar(1) - out.minus - out.plus;
    return out;
  };
  return w;
}

/// Empirical distribution of the walk at time T from `trials` runs.
inline Distribution<double> walk_mc(const WalkSpec<double>& spec, unsigned T, std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw DomainError("walk_mc requires trials >= 1");
  std::vector<long> state(trials, spec.start);
  std::vector<Xoshiro256> rng;
  rng.reserve(trials);
  for (std::size_t i = 0; i < trials; ++i) rng.push_back(Xoshiro256::derived(seed, i));
  const std::size_t width = static_cast<std::size_t>(spec.hi - spec.lo + 1);
  std::vector<std::optional<StepProbs<double>>> memo(width);
  for (unsigned t = 0; t < T; ++t) {
    std::fill(memo.begin(), memo.end(), std::nullopt);
    for (std::size_t i = 0; i < trials; ++i) {
      const std::size_t idx = static_cast<std::size_t>(state[i] - spec.lo);
      if (!memo[idx]) memo[idx] = spec.step(t, state[i]);
      const auto& p = *memo[idx];
      const double h = rng[i].uniform();
      if (h < p.minus) {
        --state[i];
      } else if (h >= 1.0 - p.plus) {
        ++state[i];
      }
    }
  }
  std::vector<std::size_t> counts(width, 0);
  for (long s : state) ++counts[static_cast<std::size_t>(s - spec.lo)];
  Distribution<double> d{spec.lo, std::vector<double>(width, 0.0)};
  for (std::size_t i = 0; i < width; ++i) d.probs[i] = static_cast<double>(counts[i]) / static_cast<double>(trials);
  return d;
}

struct CouplingResult {
  std::size_t trials = 0;
  std::size_t ordered = 0;  // paths with Q_t >= R_t at every t
  double ordered_fraction() const { return trials ? static_cast<double>(ordered) / static_cast<double>(trials) : 0.0; }
  double inversion_fraction() const { return 1.0 - ordered_fraction(); }
};

/// Shared-uniform coupling: one H per step drives both chains; a chain moves
/// left when H < q_minus and right when H >= 1 - q_plus.
inline CouplingResult coupled_mc(const WalkSpec<double>& a, const WalkSpec<double>& b, unsigned T, std::size_t trials,
                                 std::uint64_t seed) {
  if (trials < 1) throw DomainError("coupled_mc requires trials >= 1");
  std::vector<long> q(trials, a.start), r(trials, b.start);
  std::vector<char> ordered(trials, a.start >= b.start);
  std::vector<Xoshiro256> rng;
  rng.reserve(trials);
  for (std::size_t i = 0; i < trials; ++i) rng.push_back(Xoshiro256::derived(seed, i));
  std::vector<std::optional<StepProbs<double>>> memo_a(static_cast<std::size_t>(a.hi - a.lo + 1));
  std::vector<std::optional<StepProbs<double>>> memo_b(static_cast<std::size_t>(b.hi - b.lo + 1));
  auto move = [](long s, const StepProbs<double>& p, double h) {
    if (h < p.minus) return s - 1;
    if (h >= 1.0 - p.plus) return s + 1;
    return s;
  };
  for (unsigned t = 0; t < T; ++t) {
    std::fill(memo_a.begin(), memo_a.end(), std::nullopt);
    std::fill(memo_b.begin(), memo_b.end(), std::nullopt);
    for (std::size_t i = 0; i < trials; ++i) {
      const std::size_t ia = static_cast<std::size_t>(q[i] - a.lo), ib = static_cast<std::size_t>(r[i] - b.lo);
      if (!memo_a[ia]) memo_a[ia] = a.step(t, q[i]);
      if (!memo_b[ib]) memo_b[ib] = b.step(t, r[i]);
      const double h = rng[i].uniform();
      q[i] = move(q[i], *memo_a[ia], h);
      r[i] = move(r[i], *memo_b[ib], h);
      if (q[i] < r[i]) ordered[i] = 0;
    }
  }
  CouplingResult res;
  res.trials = trials;
  for (char o : ordered) res.ordered += o ? 1 : 0;
  return res;
}

struct DominationReport {
  bool holds = true;
  double worst_margin = 0.0;  // min over (t, i) of Pr[A_t >= i] - Pr[B_t >= i]
  unsigned witness_t = 0;
  long witness_i = 0;
};

/// Upper-tail comparison of two distribution sequences at every (t, i).
template <class Scalar>
DominationReport dominates_cdf(const std::vector<Distribution<Scalar>>& a, const std::vector<Distribution<Scalar>>& b,
                               double tol = 0.0) {
  if (a.size() != b.size()) throw ContractError("dominates_cdf needs equal horizons");
  DominationReport rep;
  bool first = true;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const long lo = std::min(a[t].lo(), b[t].lo());
    const long hi = std::max(a[t].hi(), b[t].hi()) + 1;
    // Running tails from the top down.
    Scalar ta = 0, tb = 0;
    for (long i = hi; i >= lo; --i) {
      ta += a[t].at(i);
      tb += b[t].at(i);
      const double margin = to_double(Scalar(ta - tb));
      if (first || margin < rep.worst_margin) {
        rep.worst_margin = margin;
        rep.witness_t = static_cast<unsigned>(t);
        rep.witness_i = i;
        first = false;
      }
      if (ta < tb && to_double(Scalar(tb - ta)) > tol) rep.holds = false;
    }
  }
  return rep;
}

struct SufficientReport {
  bool holds = true;
  double worst_margin = 0.0;
  unsigned witness_t = 0;
  long witness_i = 0;
  std::string witness_condition;
  std::size_t checks = 0;
};

namespace detail {

template <class Scalar>
std::vector<std::vector<char>> reachable_sets(const WalkSpec<Scalar>& spec, unsigned T) {
  const std::size_t width = static_cast<std::size_t>(spec.hi - spec.lo + 1);
  std::vector<std::vector<char>> out;
  std::vector<char> cur(width, 0);
  cur[static_cast<std::size_t>(spec.start - spec.lo)] = 1;
  long cmin = spec.start, cmax = spec.start;
  out.push_back(cur);
  for (unsigned t = 0; t < T; ++t) {
    std::vector<char> next(width, 0);
    long nmin = spec.hi, nmax = spec.lo;
    for (long s = cmin; s <= cmax; ++s) {
      const std::size_t i = static_cast<std::size_t>(s - spec.lo);
      if (!cur[i]) continue;
      const auto p = spec.step(t, s);
      check_step(spec, p, t, s);
      auto mark = [&](long x) {
        next[static_cast<std::size_t>(x - spec.lo)] = 1;
        nmin = std::min(nmin, x);
        nmax = std::max(nmax, x);
      };
      if (p.minus > 0) mark(s - 1);
      if (p.zero > 0) mark(s);
      if (p.plus > 0) mark(s + 1);
    }
    cur = std::move(next);
    cmin = nmin;
    cmax = nmax;
    out.push_back(cur);
  }
  return out;
}

}  // namespace detail

/// Transition-probability conditions that imply A dominates B, checked at every
/// state reachable when each transition is taken (times 0..horizon-1).
template <class Scalar>
SufficientReport domination_sufficient(const WalkSpec<Scalar>& a, const WalkSpec<Scalar>& b, unsigned horizon,
                                       double tol = 0.0) {
  const auto ra = detail::reachable_sets(a, horizon);
  const auto rb = detail::reachable_sets(b, horizon);
  SufficientReport rep;
  bool first = true;
  auto record = [&](double margin, unsigned t, long i, const char* cond) {
    ++rep.checks;
    if (first || margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.witness_t = t;
      rep.witness_i = i;
      rep.witness_condition = cond;
      first = false;
    }
    if (margin < -tol) rep.holds = false;
  };
  auto in = [](const WalkSpec<Scalar>& w, const std::vector<char>& set, long s) {
    return s >= w.lo && s <= w.hi && set[static_cast<std::size_t>(s - w.lo)];
  };
  for (unsigned t = 0; t < horizon; ++t) {
    for (long i = a.lo; i <= a.hi; ++i) {
      if (!in(a, ra[t], i)) continue;
      const auto pa = a.step(t, i);
      if (in(b, rb[t], i)) {
        const auto pb = b.step(t, i);
        record(to_double(Scalar(pa.plus - pb.plus)), t, i, "right-step");
        record(to_double(Scalar(pb.minus - pa.minus)), t, i, "left-step");
      }
      if (in(b, rb[t], i - 1)) {
        const auto pb = b.step(t, i - 1);
        record(to_double(Scalar(pa.plus + pa.zero - pb.plus)), t, i, "cross-step");
      }
    }
  }
  return rep;
}

struct WtEstimates {
  Rational mean_exact;
  double mean_lb = 0.0;
  double mean_ub = 0.0;
  double hit_lb = 0.0;
  double hit_ub = 0.0;
  double hit_dp = 0.0;
  double mean_dp = 0.0;
  bool holds = true;
};

/// Mean and hitting-probability bounds for Wt(n') at time t, checked against DP.
inline WtEstimates wt_estimates(unsigned n_prime, unsigned m, unsigned t) {
  if (m < 1 || n_prime < m) throw DomainError("wt_estimates requires n' >= m >= 1");
  WtEstimates e;
  e.mean_exact = Rational(m) * (1 - pow_rational(1 - make_rational(1, n_prime), t));
  const double np = n_prime, md = m, td = t;
  // For n' = 1 the chain is at m after one step; e^{-t/(n'-1)} is read as 0.
  const double slow = (n_prime == 1) ? (t == 0 ? 1.0 : 0.0) : std::exp(-td / (np - 1));
  e.mean_lb = md * (1 - std::exp(-td / np));
  e.mean_ub = md * (1 - slow);
  e.hit_lb = 1 - md * std::exp(-td / np);
  e.hit_ub = 1 - md * slow + md * md / 2 * std::exp(-2 * td / np);
  const auto dists = walk_dp(coupon_walk_spec<double>(n_prime, m), t);
  e.hit_dp = dists.back().at(m);
  e.mean_dp = dists.back().mean();
  const double mean = to_double(e.mean_exact);
  const double slack = 1e-12 * std::max(1.0, md);
  e.holds = e.mean_lb <= mean + slack && mean <= e.mean_ub + slack && e.hit_lb <= e.hit_dp + 1e-12 &&
            e.hit_dp <= e.hit_ub + 1e-12;
  return e;
}

}  // namespace qsc

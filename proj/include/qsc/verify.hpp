#pragma once

// Lemma-level verification campaigns. A checker evaluates both sides of one
// inequality (or equality) at every admissible grid point; points that fail
// a hypothesis filter are counted as skipped. The signed margin is always
// "bound minus quantity in the asserted direction"; a point passes when
// margin >= -tolerance.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsc/bounds.hpp"
#include "qsc/combinatorics.hpp"
#include "qsc/errors.hpp"
#include "qsc/grid.hpp"
#include "qsc/infotheory.hpp"
#include "qsc/oracle.hpp"
#include "qsc/parallel.hpp"
#include "qsc/rng.hpp"
#include "qsc/spectra.hpp"
#include "qsc/walks.hpp"

namespace qsc {

struct VerifyOptions {
  std::uint64_t seed = 0;
  unsigned workers = 0;           // 0: default_workers()
  std::optional<Tower> tower;     // overrides each checker's default tower
  std::size_t mc_trials = 10000;  // coupled Monte Carlo paths per point
};

struct PointOutcome {
  bool admissible = true;
  std::string reason;  // the failed hypothesis, when skipped
  double margin = 0.0;
  std::map<std::string, double> values;
};

struct PointRecord {
  GridPoint point;
  std::string status;  // pass | fail | skip
  double margin = 0.0;
  std::string reason;
  std::map<std::string, double> values;
};

struct VerificationReport {
  std::string lemma_id;
  std::string grid_summary;
  std::vector<std::string> hypotheses;
  std::size_t points_total = 0;
  std::size_t points_skipped = 0;
  std::size_t points_checked = 0;
  std::size_t points_passed = 0;
  double worst_margin = 0.0;
  Unit margin_unit = Unit::absolute;
  double tolerance = 0.0;
  std::map<std::string, std::string> witness;
  double runtime_ms = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> notes;
  std::vector<PointRecord> points;

  /// Vacuous campaigns (nothing admissible) do not count as passing.
  bool all_passed() const { return points_checked > 0 && points_passed == points_checked; }
};

struct PointContext {
  const VerifyOptions& opts;
  std::size_t index;  // position in canonical order

  std::uint64_t stream_seed() const { return Xoshiro256::derived(opts.seed, index)(); }
  bool exact(bool default_exact) const { return opts.tower ? *opts.tower == Tower::exact : default_exact; }
};

struct Checker {
  std::string id;
  std::string description;
  Unit unit = Unit::absolute;
  double tolerance = 0.0;
  std::vector<std::string> hypotheses;
  std::string default_grid;
  std::function<std::vector<GridPoint>(const GridPoint&)> expand;  // optional
  std::function<PointOutcome(const GridPoint&, const PointContext&)> eval;
  std::function<void(VerificationReport&)> finalize;  // optional
};

namespace detail {

inline PointOutcome skip(std::string why) {
  PointOutcome o;
  o.admissible = false;
  o.reason = std::move(why);
  return o;
}

// Negative margin for an exact mismatch, even when it underflows a double.
inline double exact_defect(const Rational& diff) {
  if (diff == 0) return 0.0;
  const double d = std::fabs(diff.get_d());
  return -std::max(d, std::numeric_limits<double>::denorm_min());
}

// Thrown by parameter decoders for points outside every hypothesis (m >= n).
struct SkipPoint {
  std::string reason;
};

struct CouponNK {
  unsigned n, k, m;
};

inline CouponNK coupon_nk(const GridPoint& p) {
  const unsigned n = point_uint(p, "n");
  unsigned k = 0;
  if (p.count("k")) {
    k = point_uint(p, "k");
    if (p.count("m") && point_uint(p, "m") + k != n) throw UsageError("grid gives inconsistent k and m");
  } else if (p.count("m")) {
    const unsigned m = point_uint(p, "m");
    if (m >= n) throw SkipPoint{"m < n"};
    k = n - m;
  } else {
    throw UsageError("coupon grids need k or m");
  }
  if (k < 1 || k >= n) throw SkipPoint{"1 <= k < n"};
  return {n, k, n - k};
}

/// A point without k or m stands for every 1 < k < n.
inline std::vector<GridPoint> expand_all_k(const GridPoint& p) {
  if (p.count("k") || p.count("m")) return {p};
  const unsigned n = point_uint(p, "n");
  std::vector<GridPoint> out;
  for (unsigned k = 2; k + 1 <= n; ++k) {
    GridPoint q = p;
    q["k"] = Rational(k);
    out.push_back(std::move(q));
  }
  return out;
}

struct OffsetTime {
  long t;
  double c;  // offset actually realised by the integer t
};

/// t = k ln m + c n rounded to an integer, with c recomputed from that t.
inline OffsetTime offset_time(unsigned n, unsigned k, unsigned m, double c) {
  const double lnm = std::log(static_cast<double>(m));
  const long t = std::lround(k * lnm + c * n);
  return {t, (static_cast<double>(t) - k * lnm) / n};
}

inline double coupon_entropy(unsigned n, unsigned k, unsigned t, bool exact) {
  return exact ? spectrum_entropy(coupon_spectrum_exact(n, k, t)) : spectrum_entropy(coupon_spectrum_float(n, k, t));
}

/// l_m lambda_{m,t} from a float spectrum, through logs.
inline double top_mass(const Spectrum<double>& spec, unsigned n, unsigned m) {
  const double lam = spec.entries[m].eigenvalue;
  if (lam <= 0) return 0.0;
  return std::exp2(log2_big(johnson_multiplicity(n, m)) + std::log2(lam));
}

inline double bv(const std::string& kind, const BoundParams& p) { return bound_value(kind, p).value; }

// ---- spectra vs oracle ----------------------------------------------------

inline PointOutcome eval_pac_like(const GridPoint& p, bool agnostic) {
  const unsigned d = point_uint(p, "d"), t = point_uint(p, "t");
  const Rational eps = point_value(p, "eps");
  if (d > 8) return skip("2^d <= 256 (oracle size)");
  PointOutcome o;
  if (!agnostic) {
    const auto spec = pac_spectrum_exact(d, eps, t);
    const auto rep = spectrum_match(spec, eig_sym(gram_pac(d, eps, t).scaled_dense()), 1e-9);
    o.values["max_abs_dev"] = rep.max_abs;
    o.margin = std::min(1e-9 - rep.max_abs, exact_defect(spec.trace() - 1));
  } else {
    const auto spec = agnostic_spectrum(d, eps, t);
    const auto rep = spectrum_match(spec, eig_sym(gram_agnostic(d, eps, t).scaled_dense()), 1e-9);
    const double tr = spec.trace();
    o.values["max_abs_dev"] = rep.max_abs;
    o.values["trace_minus_one"] = tr - 1.0;
    o.margin = std::min(1e-9 - rep.max_abs, 1e-12 - std::fabs(tr - 1.0));
  }
  return o;
}

inline PointOutcome eval_coupon_oracle(const GridPoint& p) {
  const auto c = coupon_nk(p);
  const unsigned t = point_uint(p, "t");
  if (c.k < 2) return skip("1 < k < n");
  if (c.k < c.m) return skip("k >= m");
  if (binom_exact(c.n, c.k) > 512) return skip("C(n,k) <= 512 (oracle size)");
  const auto spec = coupon_spectrum_exact(c.n, c.k, t);
  const auto rep = spectrum_match(spec, eig_sym(gram_coupon(c.n, c.k, t).scaled_dense()), 1e-10);
  PointOutcome o;
  o.values["max_abs_dev"] = rep.max_abs;
  o.margin = std::min(1e-10 - rep.max_abs, exact_defect(spec.trace() - 1));
  return o;
}

inline PointOutcome eval_spectra_vs_oracle(const GridPoint& p) {
  if (p.count("d")) {
    const auto a = eval_pac_like(p, false);
    if (!a.admissible) return a;
    const auto b = eval_pac_like(p, true);
    PointOutcome o;
    o.values["pac_max_abs_dev"] = a.values.at("max_abs_dev");
    o.values["agnostic_max_abs_dev"] = b.values.at("max_abs_dev");
    o.margin = std::min(a.margin, b.margin);
    return o;
  }
  return eval_coupon_oracle(p);
}

// ---- walks ---------------------------------------------------------------

inline PointOutcome eval_walk_identity(const GridPoint& p) {
  const auto c = coupon_nk(p);
  const unsigned T = point_uint(p, "T");
  if (c.k < 2) return skip("1 < k < n");
  if (c.k < c.m) return skip("m <= n/2");
  const auto lam = coupon_lambda_history<Rational>(c.n, c.k, T);
  const auto dp = walk_dp(w_walk_spec<Rational>(c.n, c.k), T);
  std::vector<BigInt> l(c.m + 1);
  for (unsigned s = 0; s <= c.m; ++s) l[s] = johnson_multiplicity(c.n, s);
  PointOutcome o;
  std::size_t pairs = 0;
  for (unsigned t = 0; t <= T; ++t)
    for (unsigned s = 0; s <= c.m; ++s) {
      ++pairs;
      const Rational diff = Rational(l[s]) * lam[t][s] - dp[t].at(s);
      o.margin = std::min(o.margin, exact_defect(diff));
    }
  o.values["pairs"] = static_cast<double>(pairs);
  return o;
}

inline void add_domination(PointOutcome& o, const WalkSpec<double>& a, const WalkSpec<double>& b,
                           const std::vector<Distribution<double>>& da, const std::vector<Distribution<double>>& db,
                           unsigned T, const PointContext& ctx) {
  const auto cdf = dominates_cdf(da, db, 1e-12);
  const auto suff = domination_sufficient(a, b, T, 1e-12);
  const auto mc = coupled_mc(a, b, T, ctx.opts.mc_trials, ctx.stream_seed());
  o.values["cdf_margin"] = cdf.worst_margin;
  o.values["sufficient_holds"] = suff.holds ? 1.0 : 0.0;
  o.values["sufficient_margin"] = suff.worst_margin;
  o.values["inversion_fraction"] = mc.inversion_fraction();
  o.values["T"] = T;
  // Sufficient conditions imply domination; a disagreement shows up as a
  // negative cdf margin, so no separate term is needed.
  o.margin = std::min(cdf.worst_margin, -mc.inversion_fraction());
}

inline PointOutcome eval_dom1(const GridPoint& p, const PointContext& ctx) {
  const auto c = coupon_nk(p);
  const unsigned T = point_uint(p, "tf") * c.n;
  if (c.m < 1 || 40 * c.m > c.n) return skip("1 <= m <= n/40");
  const auto a = coupon_walk_spec<double>(c.n - 5 * c.m, c.m);
  const auto b = w_walk_spec<double>(c.n, c.k);
  PointOutcome o;
  add_domination(o, a, b, walk_dp(a, T), walk_dp(b, T), T, ctx);
  return o;
}

inline PointOutcome eval_dom2(const GridPoint& p, const PointContext& ctx) {
  const auto c = coupon_nk(p);
  const unsigned T = point_uint(p, "tf") * c.n;
  if (c.m < 2 || 10 * c.m > c.n) return skip("2 <= m <= n/10");
  const auto a = w_walk_spec<double>(c.n, c.k);
  const auto b = diff_walk_spec<double>(c.n, c.m, T);
  // Reference laws for the difference come from the convolution of the
  // independent marginals, not from the projected walk.
  const auto hist = diff_walk_history<double>(c.n, c.m, T);
  std::vector<Distribution<double>> db;
  db.reserve(T + 1);
  for (unsigned t = 0; t <= T; ++t) db.push_back(hist.difference(t));
  PointOutcome o;
  add_domination(o, a, b, walk_dp(a, T), db, T, ctx);
  return o;
}

inline PointOutcome eval_expct_ub(const GridPoint& p) {
  const auto c = coupon_nk(p);
  const auto ot = offset_time(c.n, c.k, c.m, point_double(p, "c"));
  if (ot.t < 0) return skip("t >= 0");
  if (!expct_ub_hypotheses(c.n, c.m, ot.c)) return skip("1 <= m <= n/40, m ln m <= |c| n/10");
  const double mean = walk_dp(w_walk_spec<double>(c.n, c.k), static_cast<unsigned>(ot.t)).back().mean();
  const double bound = bv("expct_ub", {{"n", c.n}, {"m", c.m}, {"c", ot.c}});
  PointOutcome o;
  o.values = {{"t", static_cast<double>(ot.t)}, {"c_eff", ot.c}, {"mean", mean}, {"bound", bound}};
  o.margin = bound - mean;
  return o;
}

inline PointOutcome eval_expct_lb(const GridPoint& p) {
  const auto c = coupon_nk(p);
  const long t = std::lround(point_double(p, "c") * c.n);
  const double ceff = static_cast<double>(t) / c.n;
  if (t < 0) return skip("c >= 0");
  if (c.m < 2 || 10 * c.m > c.n) return skip("2 <= m <= n/10");
  const double mean = walk_dp(w_walk_spec<double>(c.n, c.k), static_cast<unsigned>(t)).back().mean();
  const double bound = bv("expct_lb", {{"n", c.n}, {"m", c.m}, {"c", ceff}});
  PointOutcome o;
  o.values = {{"t", static_cast<double>(t)}, {"c_eff", ceff}, {"mean", mean}, {"bound", bound}};
  o.margin = mean - bound;
  return o;
}

inline PointOutcome eval_lmlst(const GridPoint& p) {
  const auto c = coupon_nk(p);
  const auto ot = offset_time(c.n, c.k, c.m, point_double(p, "c"));
  if (ot.t < 1) return skip("t >= 1");
  if (!lmlst_hypotheses(c.n, c.m, ot.c)) return skip("c >= 0, 1 <= m <= n/40, m ln m <= c n/10");
  const unsigned t = static_cast<unsigned>(ot.t);
  const double v = top_mass(coupon_spectrum_float(c.n, c.k, t), c.n, c.m);
  const double ub = bv("lmlst_ub", {{"n", c.n}, {"m", c.m}, {"c", ot.c}});
  PointOutcome o;
  o.values = {{"t", t}, {"c_eff", ot.c}, {"lm_lambda_m", v}, {"upper", ub}};
  o.margin = ub - v;
  if (c.m >= 2) {
    const double lb = bv("lmlst_lb", {{"n", c.n}, {"m", c.m}, {"t", t}, {"c", ot.c}});
    o.values["lower"] = lb;
    o.margin = std::min(o.margin, v - lb);
  }
  return o;
}

inline PointOutcome eval_wt_est(const GridPoint& p) {
  const unsigned np = point_uint(p, "np"), m = point_uint(p, "m"), t = point_uint(p, "t");
  if (m < 1 || m > np) return skip("1 <= m <= n'");
  const auto e = wt_estimates(np, m, t);
  const double mean = to_double(e.mean_exact);
  PointOutcome o;
  o.values = {{"mean", mean},       {"mean_lb", e.mean_lb}, {"mean_ub", e.mean_ub}, {"hit", e.hit_dp},
              {"hit_lb", e.hit_lb}, {"hit_ub", e.hit_ub},   {"mean_dp", e.mean_dp}};
  o.margin = std::min({mean - e.mean_lb, e.mean_ub - mean, e.hit_dp - e.hit_lb, e.hit_ub - e.hit_dp});
  return o;
}

inline PointOutcome eval_frac(const GridPoint& p) {
  const auto c = coupon_nk(p);
  const double cc = point_double(p, "c");
  if (!expct_ub_hypotheses(c.n, c.m, cc)) return skip("1 <= m <= n/40, m ln m <= |c| n/10");
  const double t = c.k * std::log(static_cast<double>(c.m)) + cc * c.n;
  const double lhs = t / (static_cast<double>(c.n) - 5.0 * c.m - 1.0);
  const double rhs = bv("frac_rhs", {{"n", c.n}, {"m", c.m}, {"c", cc}});
  PointOutcome o;
  o.values = {{"lhs", lhs}, {"rhs", rhs}};
  o.margin = rhs - lhs;
  return o;
}

inline PointOutcome eval_ratio(const GridPoint& p, const PointContext& ctx) {
  const unsigned seq = point_uint(p, "seq"), max_len = point_uint(p, "max_len");
  if (max_len < 1) throw UsageError("max_len must be >= 1");
  Xoshiro256 rng = Xoshiro256::derived(ctx.opts.seed, seq);
  const std::size_t len = 1 + rng() % max_len;
  // Odd sequences draw from a tiny range so that ties are common.
  const std::uint64_t range = (seq % 2) ? 3 : 1000000;
  std::vector<std::int64_t> a(len);
  for (auto& x : a) x = static_cast<std::int64_t>(1 + rng() % range);
  std::sort(a.begin(), a.end(), std::greater<>());
  std::vector<std::int64_t> prefix(len + 1, 0);
  for (std::size_t i = 0; i < len; ++i) prefix[i + 1] = prefix[i] + a[i];
  PointOutcome o;
  o.values["length"] = static_cast<double>(len);
  for (std::size_t j2 = 1; j2 <= len; ++j2)
    for (std::size_t j1 = 1; j1 < j2; ++j1) {
      // j2 * S(j1) - j1 * S(j2) >= 0, exactly in integers.
      const std::int64_t num = static_cast<std::int64_t>(j2) * prefix[j1] - static_cast<std::int64_t>(j1) * prefix[j2];
      const double margin = static_cast<double>(num) / (static_cast<double>(j2) * static_cast<double>(prefix[j2]));
      o.margin = std::min(o.margin, num < 0 ? std::min(margin, -std::numeric_limits<double>::denorm_min()) : margin);
    }
  return o;
}

// ---- entropy chains ------------------------------------------------------

inline PointOutcome eval_entropy_pac(const GridPoint& p, const PointContext& ctx) {
  const unsigned d = point_uint(p, "d"), t = point_uint(p, "t");
  const Rational eps = point_value(p, "eps");
  const bool exact = ctx.exact(d <= 14);
  const auto dec = exact ? entropy_decomposition(pac_spectrum_exact(d, eps, t), d)
                         : entropy_decomposition(pac_spectrum_float(d, eps, t), d);
  const double nu = eps.get_d() * t / d;
  PointOutcome o;
  o.values = {{"entropy", dec.entropy}, {"s_td", dec.s_td}, {"mu_entropy", dec.mu_entropy}, {"nu", nu},
              {"exact", exact ? 1.0 : 0.0}};
  o.margin = dec.log2_d_plus_1 + dec.s_td - dec.entropy;
  if (exact) o.margin = std::min(o.margin, exact_defect(dec.mu_total_exact - 1));
  if (nu <= 1.0 / 12.0) {
    const double lemma = bv("pac_entropy_lemma", {{"d", d}, {"nu", nu}});
    const double full = bv("pac_entropy_ub", {{"d", d}, {"nu", nu}});
    o.values["lemma_bound"] = lemma;
    o.values["full_bound"] = full;
    o.margin = std::min({o.margin, lemma - dec.s_td, full - dec.entropy});
  }
  return o;
}

inline PointOutcome eval_entropy_agnostic(const GridPoint& p) {
  const unsigned d = point_uint(p, "d"), t = point_uint(p, "t");
  const Rational eps = point_value(p, "eps");
  const double alpha = agnostic_alpha(eps.get_d());
  const auto dec = entropy_decomposition(agnostic_spectrum(d, eps, t), d);
  const double chain = dec.log2_d_plus_1 + dec.s_td;
  PointOutcome o;
  o.values = {{"entropy", dec.entropy}, {"s_td", dec.s_td}, {"alpha", alpha}};
  o.margin = chain - dec.entropy;
  int steps = 1;
  if (1.5 * alpha * t <= d / 2.0) {
    const double tail = bv("agnostic_entropy_tail", {{"d", d}, {"alpha", alpha}, {"t", t}});
    o.values["tail_bound"] = tail;
    o.margin = std::min(o.margin, tail - chain);
    ++steps;
    const double nu = 2.0 * alpha * t / d;
    if (nu < 0.5 && d * std::exp(-alpha * t / 10.0) <= 1.0) {
      const double fin = bv("agnostic_entropy_ub", {{"d", d}, {"nu", nu}});
      o.values["final_bound"] = fin;
      o.margin = std::min(o.margin, fin - tail);
      ++steps;
    }
  }
  o.values["steps"] = steps;
  return o;
}

inline PointOutcome eval_mi_lb(const GridPoint& p, const PointContext& ctx) {
  const auto c = coupon_nk(p);
  const long t = std::lround(point_double(p, "kappa") * c.n);
  const double kappa = static_cast<double>(t) / c.n;
  if (t < 1) return skip("t >= 1");
  if (c.m < 2 || 10 * c.m > c.n) return skip("2 <= m <= n/10");
  if (!(kappa < static_cast<double>(c.n) / c.m)) return skip("kappa < n/m");
  const double s = coupon_entropy(c.n, c.k, static_cast<unsigned>(t), ctx.exact(c.n <= 60));
  const double floor = bv("miab_lb", {{"n", c.n}, {"m", c.m}, {"kappa", kappa}});
  PointOutcome o;
  o.values = {{"t", static_cast<double>(t)}, {"kappa_eff", kappa}, {"entropy", s}, {"floor", floor}};
  o.margin = s - floor;
  return o;
}

inline PointOutcome eval_mi_ub_like(const GridPoint& p, const PointContext& ctx, bool inverted) {
  const auto c = coupon_nk(p);
  const auto ot = offset_time(c.n, c.k, c.m, point_double(p, "c"));
  if (ot.t < 1) return skip("t >= 1");
  if (!expct_ub_hypotheses(c.n, c.m, ot.c)) return skip("1 <= m <= n/40, m ln m <= |c| n/10");
  const double s = coupon_entropy(c.n, c.k, static_cast<unsigned>(ot.t), ctx.exact(c.n <= 60));
  const double ceiling = bv("miab_ub", {{"n", c.n}, {"m", c.m}, {"c", ot.c}});
  PointOutcome o;
  o.values = {{"t", static_cast<double>(ot.t)}, {"c_eff", ot.c}, {"entropy", s}, {"ceiling", ceiling}};
  o.margin = inverted ? s - ceiling : ceiling - s;
  return o;
}

// ---- distinguishability ----------------------------------------------------

inline PointOutcome eval_hc_sandwich(const GridPoint& p) {
  const auto c = coupon_nk(p);
  const unsigned t = point_uint(p, "t");
  const unsigned max_dim = p.count("max_dim") ? point_uint(p, "max_dim") : 1024;
  if (max_dim > 1024) throw UsageError("hc_sandwich supports max_dim <= 1024");
  if (binom_exact(c.n, c.k) > max_dim) return skip("C(n,k) <= max_dim");
  const auto g = gram_coupon(c.n, c.k, t);
  const double hc = hc_from_gram(g);
  const double pgm = pgm_success(g);
  const auto opt = optimal_success_iterative(g);
  PointOutcome o;
  o.values = {{"hc", hc}, {"hc_sq", hc * hc}, {"pgm", pgm}, {"opt", opt.success}, {"iterations", opt.iterations}};
  o.margin = std::min({opt.success - (hc * hc - 1e-8), hc + 1e-8 - opt.success, hc + 1e-9 - pgm,
                       opt.success + 1e-9 - pgm});
  if (c.k >= c.m) {
    const double hs = hc_quantity(coupon_spectrum_float(c.n, c.k, t), binom_exact(c.n, c.k));
    o.values["hc_spectrum"] = hs;
    o.margin = std::min(o.margin, 1e-9 - std::fabs(hs - hc));
  }
  return o;
}

inline PointOutcome eval_qcc_chain(const GridPoint& p) {
  const double delta = point_double(p, "delta");
  if (!(delta > 0 && delta <= 1.0 / 40.0)) return skip("0 < delta <= 1/40");
  const auto c = coupon_nk(p);
  const double c0 = qcc_c0(delta);
  const auto ot = offset_time(c.n, c.k, c.m, point_double(p, "cfrac") * c0);
  if (!(c.m >= 1 && c.m <= delta * c.n)) return skip("1 <= m <= delta n");
  if (!(c.m * std::log(static_cast<double>(c.m)) <= c0 * c.n / 20.0)) return skip("m ln m <= c0 n/20");
  if (ot.t < 1 || ot.c < c0 / 2 || ot.c > c0) return skip("c in [c0/2, c0]");
  const auto spec = coupon_spectrum_float(c.n, c.k, static_cast<unsigned>(ot.t));
  const double hc = hc_quantity(spec, binom_exact(c.n, c.k));
  const double v = top_mass(spec, c.n, c.m);
  const double w = static_cast<double>(c.m) / (c.n - c.m + 1.0);
  const double vw = bv("qcc_hc_vw", {{"v", std::min(v, 1.0)}, {"w", w}});
  const double mid = bv("qcc_hc_mid", {{"c", ot.c}, {"w", w}});
  const double ub = bv("qcc_hc_ub", {{"c", ot.c}});
  const double v_ub = 1.0 - std::exp(-2.0 * ot.c) / 2.0;
  PointOutcome o;
  o.values = {{"t", static_cast<double>(ot.t)}, {"c_eff", ot.c}, {"c0", c0}, {"hc", hc}, {"v", v},
              {"w", w},  {"hc_vw", vw},  {"hc_mid", mid}, {"hc_ub", ub}};
  o.margin = std::min({vw - hc, v_ub - v, mid - vw, ub - mid, (1.0 - delta) - ub});
  return o;
}

inline PointOutcome eval_mm_bds(const GridPoint& p) {
  const auto c = coupon_nk(p);
  const double cc = point_double(p, "c"), delta = point_double(p, "Delta"), alpha = point_double(p, "alpha");
  const double n = c.n, m = c.m;
  if (!(alpha > 0 && alpha < 1)) return skip("0 < alpha < 1");
  if (!(delta >= 0)) return skip("Delta >= 0");
  if (!(m >= 1 && m <= std::pow(n, alpha))) return skip("1 <= m <= n^alpha");
  if (!(std::pow(n, 1.0 - alpha) >= 2)) return skip("n^(1-alpha) >= 2");
  if (!expct_ub_hypotheses(n, m, cc)) return skip("1 <= m <= n/40, m ln m <= |c| n/10");
  const double ceiling = bv("miab_ub", {{"n", n}, {"m", m}, {"c", cc}});
  const double floor = bv("mismatch_mi_floor", {{"n", n}, {"m", m}, {"k", c.k}, {"Delta", delta}});
  const double lhs = bv("mm_bds_lhs", {{"n", n}, {"alpha", alpha}, {"c", cc}, {"Delta", delta}});
  const double rhs = bv("mm_bds_rhs", {{"n", n}, {"Delta", delta}});
  const double limit = -(1.0 - alpha) * min_exp_term(cc) + 2.0 * alpha + alpha * delta + delta;
  PointOutcome o;
  o.values = {{"ceiling_minus_floor", ceiling - floor},
              {"lhs_minus_rhs", lhs - rhs},
              {"normalized", (lhs - rhs) / std::log2(n)},
              {"normalized_limit", limit}};
  // The finite-n implication: whenever the ceiling clears the floor, the
  // displayed inequality holds, because each of its terms is weaker.
  o.margin = (lhs - rhs) - (ceiling - floor);
  return o;
}

inline void mm_bds_trend(VerificationReport& r) {
  // (Delta, alpha, c, m) -> [(n, normalized)]
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  std::map<std::string, double> limits;
  for (const auto& pr : r.points) {
    if (pr.status == "skip") continue;
    std::string key;
    for (const char* name : {"Delta", "alpha", "c", "m"})
      if (pr.point.count(name)) key += std::string(key.empty() ? "" : " ") + name + "=" + to_string(pr.point.at(name));
    series[key].push_back({pr.point.at("n").get_d(), pr.values.at("normalized")});
    limits[key] = pr.values.at("normalized_limit");
  }
  for (auto& [key, pts] : series) {
    std::sort(pts.begin(), pts.end());
    char buf[128];
    std::string line = "trend " + key + ": (lhs-rhs)/log2 n";
    for (const auto& [n, v] : pts) {
      std::snprintf(buf, sizeof buf, " n=%.0f:%.6g", n, v);
      line += buf;
    }
    std::snprintf(buf, sizeof buf, "; limit %.6g (not asserted)", limits[key]);
    r.notes.push_back(line + buf);
  }
}

inline std::vector<Checker> build_checkers() {
  std::vector<Checker> cs;
  auto add = [&](Checker c) { cs.push_back(std::move(c)); };
  auto plain = [](PointOutcome (*f)(const GridPoint&)) {
    return [f](const GridPoint& p, const PointContext&) { return f(p); };
  };

  add({"spectrum_pac", "PAC spectrum equals the Gram eigenvalues (exact tower, trace exactly 1)", Unit::absolute, 0.0,
       {"2^d <= 256"}, "d = 1..3\neps = [1/8, 1/5]\nt = 1..3\n", {},
       [](const GridPoint& p, const PointContext&) { return eval_pac_like(p, false); }, {}});
  add({"spectrum_agnostic", "agnostic spectrum equals the Gram eigenvalues (float tower)", Unit::absolute, 0.0,
       {"2^d <= 256"}, "d = 1..3\neps = [1/8, 1/5]\nt = 1..3\n", {},
       [](const GridPoint& p, const PointContext&) { return eval_pac_like(p, true); }, {}});
  add({"spectrum_coupon", "coupon recurrence multiset equals the Gram eigenvalues", Unit::absolute, 0.0,
       {"1 < k < n", "k >= m", "C(n,k) <= 512"}, "n = 3..8\nt = 1..10\n", expand_all_k, plain(eval_coupon_oracle),
       {}});
  add({"spectra_vs_oracle", "closed-form spectra equal brute-force eigenvalues (d grids: PAC and agnostic)",
       Unit::absolute, 0.0, {"2^d <= 256", "1 < k < n", "k >= m", "C(n,k) <= 512"}, "n = 3..8\nt = 1..10\n",
       [](const GridPoint& p) { return p.count("n") ? expand_all_k(p) : std::vector<GridPoint>{p}; },
       plain(eval_spectra_vs_oracle), {}});
  add({"walk_identity", "l_s lambda_{s,t} = Pr[W_t = s] for all t <= T (exact)", Unit::absolute, 0.0,
       {"1 < k < n", "m <= n/2"}, "n = 3..12\nT = 50\n", expand_all_k, plain(eval_walk_identity), {}});
  add({"dom1", "Wt(n-5m) dominates W: upper tails, sufficient conditions, coupling", Unit::probability, 1e-12,
       {"1 <= m <= n/40"}, "n = [40, 80, 120, 200, 400]\nm = 1..10\ntf = 5\n", {}, eval_dom1, {}});
  add({"dom2", "W dominates W''-V'': upper tails, sufficient conditions, coupling", Unit::probability, 1e-12,
       {"2 <= m <= n/10"}, "n = [20, 40, 100, 200, 400]\nm = [2, 3, 4, 5, 10, 20, 40]\ntf = 5\n", {}, eval_dom2,
       {}});
  add({"expct_ub", "E[W_t] <= m - min{e^-2c, e^-c/3} at t = k ln m + c n", Unit::count, 1e-9,
       {"1 <= m <= n/40", "m ln m <= |c| n/10"},
       "n = [200, 400, 800, 1200, 2000]\nm = [1, 2, 3, 5, 10, 20, 50]\nc = [-2, -1, -1/2, 1/2, 1, 2, 4]\n", {},
       plain(eval_expct_ub), {}});
  add({"expct_lb", "E[W_t] >= m (1 - e^-c - c m/n) at t = c n", Unit::count, 1e-9, {"c >= 0", "2 <= m <= n/10"},
       "n = [20, 50, 100, 400, 1000, 2000]\nm = [2, 3, 5, 10, 50, 100, 200]\nc = [0, 1/4, 1/2, 1, 2, 4]\n", {},
       plain(eval_expct_lb), {}});
  add({"lmlst", "(1 - t m^2/n^2)(1 - e^(-9c/10)) <= l_m lambda_{m,t} <= 1 - e^-2c/2", Unit::probability, 1e-12,
       {"c >= 0", "1 <= m <= n/40", "m ln m <= c n/10", "lower bound: m >= 2"},
       "n = [200, 400, 800, 2000]\nm = [1, 2, 3, 5, 10, 20, 50]\nc = [1/4, 1/2, 1, 2, 4]\n", {}, plain(eval_lmlst),
       {}});
  add({"wt_est", "mean and hitting-probability estimates for Wt(n')", Unit::probability, 1e-12, {"1 <= m <= n'"},
       "np = [1, 2, 5, 10, 50, 200]\nm = [1, 2, 5, 10, 50]\nt = [0, 1, 5, 20, 100, 1000]\n", {},
       plain(eval_wt_est), {}});
  add({"frac", "t/(n - 5m - 1) <= ln m + max{2c, c/3}", Unit::nats, 1e-12,
       {"1 <= m <= n/40", "m ln m <= |c| n/10"},
       "n = [40, 100, 400, 1000, 2000]\nm = 1..50\nc = [-4, -2, -1, -1/2, 1/2, 1, 2, 4]\n", {}, plain(eval_frac),
       {}});
  add({"ratio", "prefix averages of nonincreasing positive sequences: S(j1)/S(j2) >= j1/j2", Unit::absolute, 0.0, {},
       "seq = 1..10000\nmax_len = 50\n", {}, eval_ratio, {}});
  add({"entropy_pac", "S(B) <= log2(d+1) + S_td and S_td <= d h(6 nu) + d e^(-2 nu d) for nu <= 1/12", Unit::bits,
       1e-9, {"lemma steps: nu <= 1/12"},
       "d = [1, 2, 3, 4, 5, 6, 8, 10, 12, 14, 20, 50, 100, 200]\neps = [1/8, 1/5]\nt = [1, 2, 4, 8, 16, 64, 128]\n", {},
       eval_entropy_pac, {}});
  add({"entropy_agnostic", "agnostic chain: S(B) <= log2(d+1) + S_td <= tail form <= log2(d+1) + d h(3nu/4) + 1",
       Unit::bits, 1e-9, {"tail step: 3 alpha t/2 <= d/2", "final step: nu < 1/2, d e^(-alpha t/10) <= 1"},
       "d = [4, 8, 16, 50, 300]\neps = [1/8, 6/25]\nt = [1, 4, 16, 64, 160, 180, 200]\n", {},
       [](const GridPoint& p, const PointContext&) { return eval_entropy_agnostic(p); }, {}});
  add({"mi_lb", "S(B) >= (1 - e^-kappa - kappa m/n) log2 C(n,m) - 1 at t = kappa n", Unit::bits, 1e-9,
       {"2 <= m <= n/10", "0 < kappa < n/m"},
       "n = [20, 30, 40, 50, 60, 100, 200]\nm = [2, 3, 4, 5, 10, 20]\nkappa = [1/2, 1, 2, 4]\n", {}, eval_mi_lb, {}});
  add({"mi_ub", "S(B) <= log2 C(n,m) - (log2 n - log2 m - (2m/n) log2 e) min{} + log2(m+1)", Unit::bits, 1e-9,
       {"1 <= m <= n/40", "m ln m <= |c| n/10"},
       "n = [40, 60, 80, 120, 200, 400]\nm = [1, 2, 3, 5, 10]\nc = [-2, -1, 1/2, 1, 2, 4]\n", {},
       [](const GridPoint& p, const PointContext& ctx) { return eval_mi_ub_like(p, ctx, false); }, {}});
  add({"hc_sandwich", "HC^2 <= optimal success <= HC, PGM <= optimal, spectrum and Gram HC agree", Unit::probability,
       0.0, {"1 < k < n", "C(n,k) <= max_dim (default 2^10)"}, "n = 3..8\nt = 1..6\n",
       expand_all_k, plain(eval_hc_sandwich), {}});
  add({"qcc_chain", "HC <= sqrt(v(1-w)) + sqrt(w(1-v)) <= ... <= 1 - e^-2c/8 < 1 - delta", Unit::probability, 1e-12,
       {"0 < delta <= 1/40", "1 <= m <= delta n", "m ln m <= c0 n/20", "c in [c0/2, c0]"},
       "delta = [1/100, 1/40]\nn = [300, 700, 1000, 2000, 4000]\nm = [1, 2, 3, 5, 10]\ncfrac = [11/20, 3/4, 19/20]\n",
       {}, plain(eval_qcc_chain), {}});
  add({"mm_bds", "ceiling >= mismatch floor implies the displayed finite-n inequality", Unit::bits, 1e-9,
       {"0 < alpha < 1", "1 <= m <= n^alpha", "n^(1-alpha) >= 2", "1 <= m <= n/40", "m ln m <= |c| n/10"},
       "n = [100, 1000, 10000, 100000]\nm = [1, 2, 5, 10]\nc = [-1, 1, 2]\nDelta = [0, 1/2, 1]\nalpha = [1/4, 1/2]\n",
       {}, plain(eval_mm_bds), mm_bds_trend});
  add({"control_inverted", "negative control: asserts S(B) >= the entropy ceiling, which must fail", Unit::bits, 1e-9,
       {"1 <= m <= n/40", "m ln m <= |c| n/10"}, "n = [40, 80]\nm = [1, 2]\nc = [1, 2]\n", {},
       [](const GridPoint& p, const PointContext& ctx) { return eval_mi_ub_like(p, ctx, true); }, {}});
  return cs;
}

}  // namespace detail

inline const std::vector<Checker>& checkers() {
  static const auto cs = detail::build_checkers();
  return cs;
}

inline const Checker& find_checker(const std::string& id) {
  for (const auto& c : checkers())
    if (c.id == id) return c;
  throw UsageError("unknown lemma id '" + id + "'");
}

inline GridSpec default_grid(const std::string& id) {
  const auto& c = find_checker(id);
  return parse_grid(c.default_grid, id + " default grid");
}

inline VerificationReport verify(const std::string& lemma_id, const GridSpec& grid, const VerifyOptions& opts = {}) {
  const Checker& chk = find_checker(lemma_id);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<GridPoint> pts;
  for (const auto& p : grid.points()) {
    if (chk.expand) {
      for (auto& q : chk.expand(p)) pts.push_back(std::move(q));
    } else {
      pts.push_back(p);
    }
  }
  std::vector<PointRecord> recs(pts.size());
  parallel_for(
      pts.size(),
      [&](std::size_t i) {
        const PointContext ctx{opts, i};
        PointOutcome out;
        const std::string where = lemma_id + " at " + point_label(pts[i]) + ": ";
        try {
          out = chk.eval(pts[i], ctx);
        } catch (const detail::SkipPoint& sp) {
          out = detail::skip(sp.reason);
        } catch (const UsageError& e) {
          throw UsageError(where + e.what());
        } catch (const ResourceError& e) {
          throw ResourceError(where + e.what());
        } catch (const UnsupportedRegimeError& e) {
          throw UnsupportedRegimeError(where + e.what());
        } catch (const DomainError& e) {
          throw DomainError(where + e.what());
        }
        PointRecord& r = recs[i];
        r.point = pts[i];
        r.values = std::move(out.values);
        if (!out.admissible) {
          r.status = "skip";
          r.reason = out.reason;
          return;
        }
        r.margin = out.margin;
        r.status = out.margin >= -chk.tolerance ? "pass" : "fail";
      },
      opts.workers);

  VerificationReport rep;
  rep.lemma_id = lemma_id;
  rep.grid_summary = grid.summary();
  rep.hypotheses = chk.hypotheses;
  rep.margin_unit = chk.unit;
  rep.tolerance = chk.tolerance;
  rep.seed = opts.seed;
  rep.points_total = recs.size();
  bool first = true;
  for (const auto& r : recs) {
    if (r.status == "skip") {
      ++rep.points_skipped;
      continue;
    }
    ++rep.points_checked;
    if (r.status == "pass") ++rep.points_passed;
    if (first || r.margin < rep.worst_margin) {
      rep.worst_margin = r.margin;
      rep.witness.clear();
      for (const auto& [k, v] : r.point) rep.witness[k] = to_string(v);
      first = false;
    }
  }
  rep.points = std::move(recs);
  if (rep.points_checked == 0) rep.notes.push_back("no admissible grid points");
  if (chk.finalize) chk.finalize(rep);
  rep.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline VerificationReport verify(const std::string& lemma_id, const VerifyOptions& opts = {}) {
  return verify(lemma_id, default_grid(lemma_id), opts);
}

}  // namespace qsc

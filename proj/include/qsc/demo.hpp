#pragma once

// Two numerical demonstrations.
//
// gap: with delta = 1/4 and m = floor(sqrt n), S(B) at t = kappa n against
// the fixed ceiling (7/8) log2 C(n,m) on what a mismatch-tolerant learner's
// output can carry. Entropies come from the float tower, since exact
// rationals at these sizes are pointless for a threshold search.
//
// threshold: the smallest d at which the PAC entropy ceiling falls below
// the (1 - h(3/8)) d floor, for a few fixed nu, plus the smallest d at which
// the actual S(B) at t = nu d / eps does.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qsc/bounds.hpp"
#include "qsc/combinatorics.hpp"
#include "qsc/errors.hpp"
#include "qsc/infotheory.hpp"
#include "qsc/spectra.hpp"

namespace qsc {

struct GapRow {
  unsigned n = 0, m = 0;
  Rational kappa;
  unsigned t = 0;
  double entropy = 0.0;   // S(B), bits
  double log2_binom = 0.0;
  double gamma = 0.0;     // entropy / log2 C(n,m)
  double ceiling = 0.0;   // (7/8) log2 C(n,m)
  double margin = 0.0;    // entropy - ceiling
  std::optional<double> floor;  // miab_lb, where its hypotheses hold
};

struct GapDemoReport {
  Rational delta;
  double ceiling_factor = 0.0;
  std::vector<GapRow> rows;        // n ascending, then kappa ascending
  std::optional<std::size_t> first;  // first row with gamma > ceiling_factor
  // Smallest kappa whose gamma clears the factor at every n. At fixed kappa
  // gamma itself drifts down toward its large-n limit, so the trend tracked
  // is the margin in bits at this kappa, which must not shrink as n grows.
  std::optional<Rational> kappa_star;
  bool trend_monotone_n = false;
  bool monotone_kappa = true;  // S(B) nondecreasing in kappa at each n
  std::vector<std::string> notes;

  bool ok() const { return first.has_value() && kappa_star.has_value() && trend_monotone_n && monotone_kappa; }
};

inline std::vector<unsigned> default_gap_n() { return {16, 25, 36, 49, 64, 100, 144, 225, 400, 625, 900}; }
inline std::vector<Rational> default_gap_kappa() { return {Rational(1), Rational(2), Rational(4), Rational(8)}; }

inline GapDemoReport demo_gap(const Rational& delta, const std::vector<unsigned>& n_list,
                              const std::vector<Rational>& kappas = default_gap_kappa(), double slack = 1e-9) {
  if (delta != Rational(1, 4)) throw DomainError("gap demo is defined for delta = 1/4");
  if (n_list.empty() || kappas.empty()) throw DomainError("gap demo needs at least one n and one kappa");
  for (const auto& k : kappas)
    if (k <= 0) throw DomainError("kappa must be positive");
  std::vector<unsigned> ns(n_list);
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  std::vector<Rational> ks(kappas);
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  GapDemoReport rep;
  rep.delta = delta;
  rep.ceiling_factor = 0.875;
  for (unsigned n : ns) {
    const unsigned m = static_cast<unsigned>(std::floor(std::sqrt(static_cast<double>(n))));
    if (m < 2) throw DomainError("gap demo needs floor(sqrt n) >= 2");
    const double lb = log2_binom_real(n, m);
    for (const auto& kappa : ks) {
      GapRow r;
      r.n = n;
      r.m = m;
      r.kappa = kappa;
      const Rational tq = kappa * n;
      r.t = static_cast<unsigned>(std::lround(tq.get_d()));
      if (r.t < 1) r.t = 1;
      r.entropy = spectrum_entropy(coupon_spectrum_float(n, n - m, r.t));
      r.log2_binom = lb;
      r.gamma = r.entropy / lb;
      r.ceiling = rep.ceiling_factor * lb;
      r.margin = r.entropy - r.ceiling;
      const double keff = static_cast<double>(r.t) / n;
      if (m >= 2 && 10 * m <= n && keff < static_cast<double>(n) / m)
        r.floor = bound_value("miab_lb", {{"n", n}, {"m", m}, {"kappa", keff}}).value;
      if (!rep.first && r.gamma > rep.ceiling_factor) rep.first = rep.rows.size();
      rep.rows.push_back(std::move(r));
    }
  }
  const std::size_t nk = ks.size();
  auto row = [&](std::size_t i, std::size_t j) -> const GapRow& { return rep.rows[i * nk + j]; };
  for (std::size_t i = 0; i < ns.size(); ++i)
    for (std::size_t j = 1; j < nk; ++j)
      if (row(i, j).entropy < row(i, j - 1).entropy - slack) {
        rep.monotone_kappa = false;
        rep.notes.push_back("S(B) decreases in kappa at n=" + std::to_string(ns[i]) + " kappa=" + to_string(ks[j]));
      }
  for (std::size_t j = 0; j < nk && !rep.kappa_star; ++j) {
    bool all = true;
    for (std::size_t i = 0; i < ns.size(); ++i) all = all && row(i, j).gamma > rep.ceiling_factor;
    if (all) {
      rep.kappa_star = ks[j];
      rep.trend_monotone_n = true;
      for (std::size_t i = 1; i < ns.size(); ++i)
        if (row(i, j).margin < row(i - 1, j).margin - slack) {
          rep.trend_monotone_n = false;
          rep.notes.push_back("margin shrinks in n at n=" + std::to_string(ns[i]) + " kappa=" + to_string(ks[j]));
        }
    }
  }
  if (!rep.first) rep.notes.push_back("no grid point reached gamma > 7/8");
  if (!rep.kappa_star) rep.notes.push_back("no kappa clears gamma > 7/8 at every n");
  return rep;
}

struct ThresholdRow {
  Rational eps;
  double nu = 0.0;
  std::optional<unsigned> d_bound;    // smallest d with pac_entropy_ub < pac_mi_lb
  std::optional<unsigned> d_entropy;  // smallest d with S(B) < pac_mi_lb at t = round(nu d/eps)
};

struct ThresholdReport {
  unsigned d_max_bound = 0, d_max_entropy = 0;
  std::vector<ThresholdRow> rows;
};

inline ThresholdReport demo_threshold(const std::vector<double>& nus = {1.0 / 10000, 1.0 / 5000, 1.0 / 2000},
                                      const Rational& eps = Rational(1, 8), unsigned d_max_bound = 100000,
                                      unsigned d_max_entropy = 2000) {
  ThresholdReport rep;
  rep.d_max_bound = d_max_bound;
  rep.d_max_entropy = d_max_entropy;
  for (double nu : nus) {
    if (!(nu > 0 && nu <= 1.0 / 12.0)) throw DomainError("threshold demo needs 0 < nu <= 1/12");
    ThresholdRow row;
    row.eps = eps;
    row.nu = nu;
    for (unsigned d = 1; d <= d_max_bound; ++d) {
      const BoundParams p{{"d", d}, {"nu", nu}};
      if (bound_value("pac_entropy_ub", p).value < bound_value("pac_mi_lb", {{"d", d}}).value) {
        row.d_bound = d;
        break;
      }
    }
    for (unsigned d = 1; d <= d_max_entropy; ++d) {
      const long t = std::lround(nu * d / eps.get_d());
      if (t < 1) continue;
      const double s = spectrum_entropy(pac_spectrum_float(d, eps, static_cast<unsigned>(t)));
      if (s < bound_value("pac_mi_lb", {{"d", d}}).value) {
        row.d_entropy = d;
        break;
      }
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace qsc

// Acceptance suite: one [PASS]/[FAIL] line per criterion, with the measured
// runtime against its limit. Exit status is nonzero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "qsc/demo.hpp"
#include "qsc/infotheory.hpp"
#include "qsc/oracle.hpp"
#include "qsc/spectra.hpp"
#include "qsc/verify.hpp"
#include "qsc/walks.hpp"

using namespace qsc;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

GridSpec grid_file(const std::string& name) { return load_grid(std::string(QSC_GRID_DIR) + "/" + name); }

// Summary of one campaign; a campaign counts only if it checked something.
void campaign(Outcome& o, const VerificationReport& r) {
  o.require(r.all_passed(), r.lemma_id + " (" + std::to_string(r.points_passed) + "/" +
                                std::to_string(r.points_checked) + ", worst " + fmt(r.worst_margin) + ")");
  if (r.all_passed())
    o.note(r.lemma_id + " " + std::to_string(r.points_checked) + " pts, worst " + fmt(r.worst_margin) + " " +
           to_string(r.margin_unit));
}

std::vector<double> expand(const Spectrum<Rational>& s) {
  std::vector<double> v;
  for (const auto& e : s.entries) v.insert(v.end(), e.multiplicity.get_ui(), e.eigenvalue.get_d());
  return v;
}

bool multiset_equals(const Spectrum<Rational>& s, std::vector<Rational> want) {
  std::vector<Rational> got;
  for (const auto& e : s.entries)
    for (unsigned long i = 0; i < e.multiplicity.get_ui(); ++i)
      if (e.eigenvalue != 0) got.push_back(e.eigenvalue);
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  return got == want;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(QSC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome c1() {
  Outcome o;
  campaign(o, verify("spectrum_pac", parse_grid("d = 1..3\nt = 1..3\neps = [1/8, 1/5]\n")));
  const auto s = pac_spectrum_exact(2, make_rational(1, 8), 2);
  o.require(multiset_equals(s, {make_rational(19, 32), make_rational(3, 16), make_rational(3, 16),
                                make_rational(1, 32)}),
            "(2, 1/8, 2) multiset");
  return o;
}

Outcome c2() {
  Outcome o;
  campaign(o, verify("spectrum_agnostic", parse_grid("d = 1..3\nt = 1..3\neps = [1/8, 1/5]\n")));
  return o;
}

Outcome c3() {
  Outcome o;
  const auto r = verify("spectrum_coupon", parse_grid("n = 3..8\nt = 1..10\n"));
  campaign(o, r);
  // Every admissible (n, k) with m <= n/2 is covered.
  std::size_t expected = 0;
  for (unsigned n = 3; n <= 8; ++n)
    for (unsigned k = 2; k < n; ++k) expected += (2 * (n - k) <= n) ? 10 : 0;
  o.require(r.points_checked == expected, "coverage " + std::to_string(r.points_checked) + " of " +
                                              std::to_string(expected));
  o.require(multiset_equals(coupon_spectrum_exact(3, 2, 1), {make_rational(2, 3), make_rational(1, 6),
                                                             make_rational(1, 6)}),
            "(3, 2, 1) multiset");
  return o;
}

Outcome c4() {
  Outcome o;
  const auto r = verify("walk_identity", grid_file("walk_identity.grid"));
  campaign(o, r);
  o.require(r.worst_margin == 0.0, "exact equality (margin 0)");
  return o;
}

Outcome c5() {
  Outcome o;
  std::size_t count = 0;
  bool all = true;
  for (unsigned d = 1; d <= 3; ++d)
    for (const auto& eps : {make_rational(1, 8), make_rational(1, 5)})
      for (unsigned t = 1; t <= 3; ++t, ++count) all = all && pac_spectrum_exact(d, eps, t).trace() == 1;
  o.require(all, "PAC traces");
  double agn = 0;
  for (unsigned d = 1; d <= 3; ++d)
    for (const auto& eps : {make_rational(1, 8), make_rational(1, 5)})
      for (unsigned t = 1; t <= 3; ++t) agn = std::max(agn, std::fabs(agnostic_spectrum(d, eps, t).trace() - 1));
  o.require(agn <= 1e-12, "agnostic float trace within 1e-12 (" + fmt(agn) + ")");
  // Coupon spectra of criteria 3 and 4: every (n, k) with m <= n/2, n <= 40, t <= 200.
  for (unsigned n = 3; n <= 40; ++n)
    for (unsigned k = 2; k < n; ++k) {
      const unsigned m = n - k;
      if (2 * m > n) continue;
      const auto hist = coupon_lambda_history<Rational>(n, k, 200);
      for (unsigned t = 1; t <= 200; ++t, ++count) {
        Rational tr = 0;
        for (unsigned s = 0; s <= m; ++s) tr += Rational(johnson_multiplicity(n, s)) * hist[t][s];
        all = all && tr == 1;
      }
    }
  o.require(all, "exact traces");
  o.note(std::to_string(count) + " exact spectra with trace exactly 1; agnostic max dev " + fmt(agn));
  return o;
}

Outcome c6() {
  Outcome o;
  VerifyOptions opts;
  opts.mc_trials = 10000;
  for (const char* id : {"dom1", "dom2"}) {
    const auto r = verify(id, grid_file(std::string(id) + ".grid"), opts);
    campaign(o, r);
    std::size_t suff = 0, inversions = 0;
    for (const auto& p : r.points) {
      if (p.status == "skip") continue;
      if (p.values.at("sufficient_holds") == 1.0) {
        ++suff;
        o.require(p.values.at("cdf_margin") >= -1e-12, std::string(id) + " sufficient without domination at " +
                                                           point_label(p.point));
      }
      if (p.values.at("inversion_fraction") != 0.0) ++inversions;
      o.require(p.values.at("T") <= 5 * p.point.at("n").get_d(), "t <= 5n");
    }
    o.require(inversions == 0, std::string(id) + " coupled inversions");
    o.note(std::string(id) + " sufficient conditions hold at " + std::to_string(suff) + "/" +
           std::to_string(r.points_checked));
  }
  return o;
}

Outcome c7() {
  Outcome o;
  campaign(o, verify("expct_ub", grid_file("walk_bounds.grid")));
  campaign(o, verify("lmlst", grid_file("walk_bounds.grid")));
  campaign(o, verify("expct_lb", grid_file("expct_lb.grid")));
  return o;
}

Outcome c8() {
  Outcome o;
  const auto r = verify("hc_sandwich", grid_file("hc_sandwich.grid"));
  campaign(o, r);
  std::size_t expected = 0;
  for (unsigned n = 3; n <= 64; ++n)
    for (unsigned k = 2; k < n; ++k) expected += binom_exact(n, k) <= 64 ? 6 : 0;
  o.require(r.points_checked == expected,
            "coverage " + std::to_string(r.points_checked) + " of " + std::to_string(expected));
  const auto g = gram_coupon(3, 2, 1);
  const double pgm = pgm_success(g), hc = hc_from_gram(g);
  o.require(std::fabs(pgm - 8.0 / 9.0) <= 1e-9, "(3,2,1) PGM = 8/9 (" + fmt(pgm) + ")");
  o.require(std::fabs(hc - 0.94281) <= 1e-5, "(3,2,1) HC = 0.94281 (" + fmt(hc) + ")");
  return o;
}

Outcome c9() {
  Outcome o;
  const auto pac = verify("entropy_pac", grid_file("entropy_pac.grid"));
  campaign(o, pac);
  std::size_t exact = 0, flt = 0, lemma = 0;
  for (const auto& p : pac.points) {
    (p.values.at("exact") == 1.0 ? exact : flt) += 1;
    lemma += p.values.count("lemma_bound");
  }
  o.require(exact > 0 && flt > 0 && lemma > 0, "both towers and the lemma step exercised");
  o.note("entropy_pac exact " + std::to_string(exact) + ", float " + std::to_string(flt) + ", lemma steps " +
         std::to_string(lemma));
  campaign(o, verify("mi_lb", grid_file("mi_lb.grid")));
  campaign(o, verify("mi_ub", grid_file("mi_ub.grid")));
  return o;
}

Outcome c10() {
  Outcome o;
  const auto r = demo_gap(make_rational(1, 4), default_gap_n());
  o.require(r.first.has_value(), "an (n, kappa) with gamma > 7/8");
  o.require(r.kappa_star.has_value(), "a kappa clearing 7/8 at every n");
  o.require(r.trend_monotone_n, "margin nondecreasing in n");
  o.require(r.monotone_kappa, "S(B) nondecreasing in kappa");
  if (r.first) {
    const auto& f = r.rows[*r.first];
    o.note("first n=" + std::to_string(f.n) + " m=" + std::to_string(f.m) + " kappa=" + to_string(f.kappa) +
           " gamma=" + fmt(f.gamma) + " S=" + fmt(f.entropy) + " ceiling=" + fmt(f.ceiling) + " margin=" +
           fmt(f.margin) + " bits");
  }
  if (r.kappa_star) {
    const auto& last = r.rows.back();
    o.note("kappa*=" + to_string(*r.kappa_star) + ", largest n=" + std::to_string(last.n));
  }
  return o;
}

Outcome c11() {
  Outcome o;
  // Perturbed eigenvalue.
  const auto s = pac_spectrum_exact(2, make_rational(1, 8), 2);
  auto eigs = expand(s);
  eigs[1] += 1e-3;
  const auto rep = spectrum_match(s, eigs, 1e-9);
  o.require(!rep.match, "spectrum_match flags a 1e-3 perturbation");
  o.require(std::fabs(rep.max_abs - 1e-3) < 1e-9, "perturbation size reported");

  // Inflated left step on the dominating walk.
  const unsigned n = 80, m = 2;
  auto a = coupon_walk_spec<double>(n - 5 * m, m);
  const auto b = w_walk_spec<double>(n, n - m);
  o.require(domination_sufficient(a, b, 5 * n, 1e-12).holds, "unperturbed pair satisfies the conditions");
  const auto base = a.step;
  a.step = [base](unsigned t, long st) {
    auto p = base(t, st);
    const double shift = st > 0 ? std::min(0.05, p.zero) : 0.0;
    p.minus += shift;
    p.zero -= shift;
    return p;
  };
  const auto bad = domination_sufficient(a, b, 5 * n, 1e-12);
  o.require(!bad.holds, "inflated left step rejected");
  if (!bad.holds) o.note("rejected by " + bad.witness_condition + " margin " + fmt(bad.worst_margin));

  // Inverted inequality through the command line.
  const int code = run_cli("verify control_inverted");
  o.require(code == 1, "inverted inequality exits 1 (got " + std::to_string(code) + ")");
  return o;
}

struct Criterion {
  const char* id;
  const char* title;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all{
      {"C1", "PAC spectrum vs oracle", 5, c1},
      {"C2", "agnostic spectrum vs oracle", 5, c2},
      {"C3", "coupon spectrum vs oracle", 30, c3},
      {"C4", "walk identity, exact, n <= 40, t <= 200", 60, c4},
      {"C5", "trace identities", 60, c5},
      {"C6", "domination", 120, c6},
      {"C7", "expectation and spectral bounds", 120, c7},
      {"C8", "HC sandwich", 60, c8},
      {"C9", "entropy chains", 120, c9},
      {"C10", "gap demo", 300, c10},
      {"C11", "negative controls", 60, c11},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = o.ok && in_time;
    failed += pass ? 0 : 1;
    std::printf("[%s] %s %s (%.2fs / %.0fs)%s: %s\n", pass ? "PASS" : "FAIL", c.id, c.title, secs, c.limit_s,
                in_time ? "" : " TIME LIMIT EXCEEDED", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}

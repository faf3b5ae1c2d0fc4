// qsc: command-line front end.
//
// Exit codes: 0 success / all points passed, 1 verification or demo failure,
// 2 usage error (bad flags, unknown lemma, parameters outside a domain,
// requests beyond the dense-oracle size limits).

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qsc/bounds.hpp"
#include "qsc/demo.hpp"
#include "qsc/grid.hpp"
#include "qsc/infotheory.hpp"
#include "qsc/oracle.hpp"
#include "qsc/report.hpp"
#include "qsc/spectra.hpp"
#include "qsc/verify.hpp"
#include "qsc/walks.hpp"

using namespace qsc;

namespace {

struct Globals {
  std::string format = "csv";
  std::uint64_t seed = 0;
  std::string tower;  // empty: command default
  std::string out;
  bool timing = false;
};

class Output {
 public:
  explicit Output(const Globals& g) : g_(g) {}
  bool json() const { return g_.format == "json"; }
  void write(const std::string& text) const {
    if (g_.out.empty()) {
      std::cout << text;
      std::cout.flush();
      return;
    }
    std::ofstream f(g_.out, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + g_.out + "'");
    f << text;
  }
  void write(const Json& j) const { write(j.dump(2) + "\n"); }

 private:
  const Globals& g_;
};

Tower tower_or(const Globals& g, Tower fallback) {
  if (g.tower.empty()) return fallback;
  return g.tower == "exact" ? Tower::exact : Tower::floating;
}

unsigned to_uint(const std::string& s, const char* name) {
  const Rational v = parse_rational(s);
  if (v.get_den() != 1 || v < 0 || v > 4000000000.0)
    throw UsageError(std::string(name) + " must be a non-negative integer");
  return static_cast<unsigned>(v.get_num().get_ui());
}

std::string scalar_text(const Rational& q) { return to_string(q); }
std::string scalar_text(double x) { return format_double(x); }
Json scalar_json(const Rational& q) { return to_string(q); }
Json scalar_json(double x) { return json_number(x); }

// ---- spectrum -------------------------------------------------------------

template <class S>
void emit_spectrum(const Output& out, const Spectrum<S>& spec, const std::string& kind, const char* index_name,
                   const Json& params) {
  if (out.json()) {
    Json j;
    j["kind"] = kind;
    j["params"] = params;
    j["tower"] = to_string(Spectrum<S>::tower());
    j["trace"] = scalar_json(spec.trace());
    Json rows = Json::array();
    for (std::size_t i = 0; i < spec.entries.size(); ++i)
      rows.push_back({{index_name, i},
                      {"eigenvalue", scalar_json(spec.entries[i].eigenvalue)},
                      {"multiplicity", spec.entries[i].multiplicity.get_str()}});
    j["entries"] = std::move(rows);
    out.write(j);
    return;
  }
  std::string s = std::string(index_name) + ",eigenvalue,multiplicity\n";
  for (std::size_t i = 0; i < spec.entries.size(); ++i)
    s += std::to_string(i) + "," + scalar_text(spec.entries[i].eigenvalue) + "," +
         spec.entries[i].multiplicity.get_str() + "\n";
  out.write(s);
}

struct FamilyArgs {
  std::string family;
  std::vector<std::string> args;
};

// pac|agnostic: d eps t; coupon: n k t.
void check_family_args(const FamilyArgs& fa) {
  if (fa.args.size() != 3) throw UsageError(fa.family + " takes three parameters");
}

int run_spectrum(const Globals& g, const FamilyArgs& fa) {
  check_family_args(fa);
  const Output out(g);
  if (fa.family == "coupon") {
    const unsigned n = to_uint(fa.args[0], "n"), k = to_uint(fa.args[1], "k"), t = to_uint(fa.args[2], "t");
    const Json params{{"n", n}, {"k", k}, {"t", t}};
    if (tower_or(g, Tower::floating) == Tower::exact)
      emit_spectrum(out, coupon_spectrum_exact(n, k, t), "coupon", "s", params);
    else
      emit_spectrum(out, coupon_spectrum_float(n, k, t), "coupon", "s", params);
    return 0;
  }
  const unsigned d = to_uint(fa.args[0], "d"), t = to_uint(fa.args[2], "t");
  const Rational eps = parse_rational(fa.args[1]);
  const Json params{{"d", d}, {"eps", to_string(eps)}, {"t", t}};
  if (fa.family == "pac") {
    if (tower_or(g, Tower::floating) == Tower::exact)
      emit_spectrum(out, pac_spectrum_exact(d, eps, t), "pac", "h", params);
    else
      emit_spectrum(out, pac_spectrum_float(d, eps, t), "pac", "h", params);
    return 0;
  }
  if (tower_or(g, Tower::floating) == Tower::exact)
    throw UsageError("the agnostic spectrum is float only (its weights are irrational)");
  emit_spectrum(out, agnostic_spectrum(d, eps, t), "agnostic", "h", params);
  return 0;
}

// ---- entropy ----------------------------------------------------------------

void emit_quantities(const Output& out, const std::string& kind, const Json& params,
                     const std::vector<std::tuple<std::string, double, std::string>>& q) {
  if (out.json()) {
    Json j;
    j["kind"] = kind;
    j["params"] = params;
    Json vals = Json::object();
    for (const auto& [name, v, unit] : q) vals[name] = {{"value", json_number(v)}, {"unit", unit}};
    j["values"] = std::move(vals);
    out.write(j);
    return;
  }
  std::string s = "quantity,value,unit\n";
  for (const auto& [name, v, unit] : q) s += name + "," + format_double(v) + "," + unit + "\n";
  out.write(s);
}

int run_entropy(const Globals& g, const FamilyArgs& fa) {
  check_family_args(fa);
  const Output out(g);
  const bool exact = tower_or(g, Tower::floating) == Tower::exact;
  if (fa.family == "coupon") {
    const unsigned n = to_uint(fa.args[0], "n"), k = to_uint(fa.args[1], "k"), t = to_uint(fa.args[2], "t");
    const double s = exact ? spectrum_entropy(coupon_spectrum_exact(n, k, t))
                           : spectrum_entropy(coupon_spectrum_float(n, k, t));
    const double r = log2_rank(coupon_spectrum_float(n, k, t));
    emit_quantities(out, "coupon", {{"n", n}, {"k", k}, {"t", t}},
                    {{"entropy", s, "bits"}, {"log2_rank", r, "bits"}, {"log2_binom_n_k", log2_binom_real(n, k), "bits"}});
    return 0;
  }
  const unsigned d = to_uint(fa.args[0], "d"), t = to_uint(fa.args[2], "t");
  const Rational eps = parse_rational(fa.args[1]);
  PacEntropyDecomposition dec;
  if (fa.family == "pac") {
    dec = exact ? entropy_decomposition(pac_spectrum_exact(d, eps, t), d)
                : entropy_decomposition(pac_spectrum_float(d, eps, t), d);
  } else {
    if (exact) throw UsageError("the agnostic spectrum is float only (its weights are irrational)");
    dec = entropy_decomposition(agnostic_spectrum(d, eps, t), d);
  }
  emit_quantities(out, fa.family, {{"d", d}, {"eps", to_string(eps)}, {"t", t}},
                  {{"entropy", dec.entropy, "bits"},
                   {"mu_entropy", dec.mu_entropy, "bits"},
                   {"s_td", dec.s_td, "bits"},
                   {"log2_d_plus_1", dec.log2_d_plus_1, "bits"},
                   {"chain_rhs", dec.log2_d_plus_1 + dec.s_td, "bits"}});
  return 0;
}

// ---- walks ----------------------------------------------------------------

struct WalkArgs {
  std::string family;  // w | coupon | diff
  unsigned a = 0, b = 0, T = 0;
  bool all = false;
  std::size_t trials = 10000;
};

template <class S>
WalkSpec<S> make_walk(const WalkArgs& w) {
  if (w.family == "w") return w_walk_spec<S>(w.a, w.b);
  if (w.family == "coupon") return coupon_walk_spec<S>(w.a, w.b);
  if constexpr (std::is_same_v<S, double>) {
    return diff_walk_spec<double>(w.a, w.b, w.T);
  } else {
    throw UsageError("internal: exact diff walk goes through the history route");
  }
}

template <class S>
void emit_distributions(const Output& out, const std::vector<Distribution<S>>& ds, unsigned first_t,
                        const Json& params) {
  if (out.json()) {
    Json j;
    j["params"] = params;
    Json rows = Json::array();
    for (std::size_t i = 0; i < ds.size(); ++i) {
      Json probs = Json::object();
      for (long s = ds[i].lo(); s <= ds[i].hi(); ++s) probs[std::to_string(s)] = scalar_json(ds[i].at(s));
      rows.push_back({{"t", first_t + i}, {"probabilities", probs}});
    }
    j["distributions"] = std::move(rows);
    out.write(j);
    return;
  }
  std::string s = "t,s,probability\n";
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (long x = ds[i].lo(); x <= ds[i].hi(); ++x)
      s += std::to_string(first_t + i) + "," + std::to_string(x) + "," + scalar_text(ds[i].at(x)) + "\n";
  out.write(s);
}

template <class S>
void walk_dp_tower(const Output& out, const WalkArgs& w, const Json& params) {
  std::vector<Distribution<S>> ds;
  if (w.family == "diff") {
    const auto h = diff_walk_history<S>(w.a, w.b, w.T);
    for (unsigned t = w.all ? 0 : w.T; t <= w.T; ++t) ds.push_back(h.difference(t));
  } else {
    ds = walk_dp(make_walk<S>(w), w.T);
    if (!w.all) ds.erase(ds.begin(), ds.end() - 1);
  }
  emit_distributions(out, ds, w.all ? 0 : w.T, params);
}

int run_walk(const Globals& g, const std::string& mode, const WalkArgs& w) {
  const Output out(g);
  const Json params{{"family", w.family}, {"a", w.a}, {"b", w.b}, {"T", w.T}, {"mode", mode}};
  if (mode == "dp") {
    if (tower_or(g, Tower::floating) == Tower::exact)
      walk_dp_tower<Rational>(out, w, params);
    else
      walk_dp_tower<double>(out, w, params);
    return 0;
  }
  if (w.all) throw UsageError("--all is available for dp only");
  if (tower_or(g, Tower::floating) == Tower::exact) throw UsageError("walk mc is float only");
  Json p = params;
  p["trials"] = w.trials;
  p["seed"] = g.seed;
  emit_distributions(out, std::vector<Distribution<double>>{walk_mc(make_walk<double>(w), w.T, w.trials, g.seed)}, w.T,
                     p);
  return 0;
}

// ---- distinguishability -----------------------------------------------------

template <class Level>
std::vector<std::tuple<std::string, double, std::string>> distinguish_gram(const std::string& what,
                                                                           const GramMatrix<Level>& gm) {
  if (what == "hc") return {{"hc", hc_from_gram(gm), "probability"}};
  if (what == "pgm") return {{"pgm", pgm_success(gm), "probability"}};
  const auto r = optimal_success_iterative(gm);
  return {{"optimal", r.success, "probability"},
          {"iterations", static_cast<double>(r.iterations), "count"},
          {"converged", r.converged ? 1.0 : 0.0, "count"}};
}

int run_distinguish(const Globals& g, const std::string& what, const FamilyArgs& fa) {
  check_family_args(fa);
  const Output out(g);
  std::vector<std::tuple<std::string, double, std::string>> q;
  Json params;
  if (fa.family == "coupon") {
    const unsigned n = to_uint(fa.args[0], "n"), k = to_uint(fa.args[1], "k"), t = to_uint(fa.args[2], "t");
    params = {{"n", n}, {"k", k}, {"t", t}};
    // HC has a closed route through the spectrum, usable far past the oracle sizes.
    if (what == "hc" && k >= n - k)
      q = {{"hc", hc_quantity(coupon_spectrum_float(n, k, t), binom_exact(n, k)), "probability"}};
    else
      q = distinguish_gram(what, gram_coupon(n, k, t));
  } else {
    const unsigned d = to_uint(fa.args[0], "d"), t = to_uint(fa.args[2], "t");
    const Rational eps = parse_rational(fa.args[1]);
    params = {{"d", d}, {"eps", to_string(eps)}, {"t", t}};
    const BigInt size = pow_big(2, d);
    if (fa.family == "pac") {
      q = what == "hc" ? decltype(q){{"hc", hc_quantity(pac_spectrum_float(d, eps, t), size), "probability"}}
                       : distinguish_gram(what, gram_pac(d, eps, t));
    } else {
      q = what == "hc" ? decltype(q){{"hc", hc_quantity(agnostic_spectrum(d, eps, t), size), "probability"}}
                       : distinguish_gram(what, gram_agnostic(d, eps, t));
    }
  }
  emit_quantities(out, fa.family, params, q);
  return 0;
}

// ---- verify, demo, bound ------------------------------------------------------

int run_verify(const Globals& g, const std::string& id, const std::string& grid_path, std::size_t trials,
               bool list) {
  const Output out(g);
  if (list) {
    if (out.json()) {
      Json j = Json::array();
      for (const auto& c : checkers())
        j.push_back({{"id", c.id}, {"unit", to_string(c.unit)}, {"description", c.description}});
      out.write(j);
    } else {
      std::string s = "id,unit,description\n";
      for (const auto& c : checkers()) s += csv_row({c.id, to_string(c.unit), c.description});
      out.write(s);
    }
    return 0;
  }
  if (id.empty()) throw UsageError("verify needs a lemma id (see verify --list)");
  find_checker(id);
  VerifyOptions o;
  o.seed = g.seed;
  o.mc_trials = trials;
  if (!g.tower.empty()) o.tower = tower_or(g, Tower::floating);
  const GridSpec grid = grid_path.empty() ? default_grid(id) : load_grid(grid_path);
  const auto rep = verify(id, grid, o);
  if (out.json())
    out.write(to_json(rep, g.timing));
  else
    out.write(to_csv(rep, g.timing));
  std::fprintf(stderr, "%s: %zu/%zu points passed, %zu skipped, worst margin %s %s\n", id.c_str(),
               rep.points_passed, rep.points_checked, rep.points_skipped, format_double(rep.worst_margin).c_str(),
               to_string(rep.margin_unit).c_str());
  return rep.all_passed() ? 0 : 1;
}

std::vector<Rational> parse_list(const std::string& text) {
  std::vector<Rational> v;
  for (const auto& item : detail::split(text, ",")) v.push_back(parse_rational(detail::trim(item)));
  return v;
}

int run_demo(const Globals& g, const std::string& which, const std::string& n_list, const std::string& kappa_list,
             const std::string& nu_list) {
  const Output out(g);
  if (which == "gap") {
    std::vector<unsigned> ns = default_gap_n();
    if (!n_list.empty()) {
      ns.clear();
      for (const auto& q : parse_list(n_list)) ns.push_back(to_uint(to_string(q), "n"));
    }
    const auto ks = kappa_list.empty() ? default_gap_kappa() : parse_list(kappa_list);
    const auto rep = demo_gap(make_rational(1, 4), ns, ks);
    if (out.json())
      out.write(to_json(rep));
    else
      out.write(to_csv(rep));
    return rep.ok() ? 0 : 1;
  }
  std::vector<double> nus{1.0 / 10000, 1.0 / 5000, 1.0 / 2000};
  if (!nu_list.empty()) {
    nus.clear();
    for (const auto& q : parse_list(nu_list)) nus.push_back(q.get_d());
  }
  const auto rep = demo_threshold(nus);
  if (out.json())
    out.write(to_json(rep));
  else
    out.write(to_csv(rep));
  return 0;
}

int run_bound(const Globals& g, const std::string& kind, const std::vector<std::string>& assigns, bool list) {
  const Output out(g);
  if (list) {
    std::string s = "kind,unit,params,formula\n";
    for (const auto& [k, info] : bound_registry()) {
      std::string ps;
      for (const auto& p : info.params) ps += (ps.empty() ? "" : " ") + p;
      s += csv_row({k, to_string(info.unit), ps, info.summary});
    }
    out.write(s);
    return 0;
  }
  if (kind.empty()) throw UsageError("bound needs a kind (see bound --list)");
  BoundParams p;
  for (const auto& a : assigns) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw UsageError("bound parameters are name=value, got '" + a + "'");
    p[a.substr(0, eq)] = parse_rational(a.substr(eq + 1)).get_d();
  }
  const auto v = bound_value(kind, p);
  Json params = Json::object();
  for (const auto& [k, x] : v.params) params[k] = json_number(x);
  emit_quantities(out, kind, params, {{kind, v.value, to_string(v.unit)}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra, entropies, walks and lemma verification for quantum sample-complexity bounds"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", g.seed, "Master seed for Monte Carlo streams");
  app.add_option("--tower", g.tower, "Number tower: exact (rationals) or float")
      ->check(CLI::IsMember({"exact", "float"}));
  app.add_option("--out", g.out, "Write the report to this file instead of stdout");
  app.add_flag("--timing", g.timing, "Include runtime_ms in verification reports");

  std::function<int()> action;

  FamilyArgs spec_args, ent_args, dist_args;
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues with multiplicities");
  spectrum->add_option("family", spec_args.family, "pac | agnostic | coupon")
      ->required()
      ->check(CLI::IsMember({"pac", "agnostic", "coupon"}));
  spectrum->add_option("params", spec_args.args, "d eps t (pac, agnostic) or n k t (coupon)")->required();
  spectrum->callback([&] { action = [&] { return run_spectrum(g, spec_args); }; });

  auto* entropy = app.add_subcommand("entropy", "Von Neumann entropy of the t-copy mixture, in bits");
  entropy->add_option("family", ent_args.family, "pac | agnostic | coupon")
      ->required()
      ->check(CLI::IsMember({"pac", "agnostic", "coupon"}));
  entropy->add_option("params", ent_args.args, "d eps t or n k t")->required();
  entropy->callback([&] { action = [&] { return run_entropy(g, ent_args); }; });

  WalkArgs walk_args;
  std::string walk_mode;
  auto* walk = app.add_subcommand("walk", "Birth-death walk distributions");
  walk->add_option("mode", walk_mode, "dp | mc")->required()->check(CLI::IsMember({"dp", "mc"}));
  walk->add_option("family", walk_args.family, "w (n k) | coupon (n' m) | diff (n m)")
      ->required()
      ->check(CLI::IsMember({"w", "coupon", "diff"}));
  walk->add_option("a", walk_args.a, "n or n'")->required();
  walk->add_option("b", walk_args.b, "k or m")->required();
  walk->add_option("T", walk_args.T, "horizon")->required();
  walk->add_flag("--all", walk_args.all, "Emit every t in 0..T (dp)");
  walk->add_option("--trials", walk_args.trials, "Monte Carlo paths (mc)")->check(CLI::PositiveNumber);
  walk->callback([&] { action = [&] { return run_walk(g, walk_mode, walk_args); }; });

  std::string dist_what;
  auto* dist = app.add_subcommand("distinguish", "HC, PGM and iterative optimal success");
  dist->add_option("quantity", dist_what, "hc | pgm | opt")->required()->check(CLI::IsMember({"hc", "pgm", "opt"}));
  dist->add_option("family", dist_args.family, "pac | agnostic | coupon")
      ->required()
      ->check(CLI::IsMember({"pac", "agnostic", "coupon"}));
  dist->add_option("params", dist_args.args, "d eps t or n k t")->required();
  dist->callback([&] { action = [&] { return run_distinguish(g, dist_what, dist_args); }; });

  std::string lemma, grid_path;
  std::size_t trials = 10000;
  bool list_lemmas = false;
  auto* ver = app.add_subcommand("verify", "Run a lemma verification campaign");
  ver->add_option("lemma_id", lemma, "Checker id");
  ver->add_option("--grid", grid_path, "Grid file (default: the checker's shipped grid)");
  ver->add_option("--trials", trials, "Coupled Monte Carlo paths per point")->check(CLI::PositiveNumber);
  ver->add_flag("--list", list_lemmas, "List checker ids");
  ver->callback([&] { action = [&] { return run_verify(g, lemma, grid_path, trials, list_lemmas); }; });

  std::string demo_which, n_list, kappa_list, nu_list;
  auto* demo = app.add_subcommand("demo", "Numerical demonstrations");
  demo->add_option("which", demo_which, "gap | threshold")->required()->check(CLI::IsMember({"gap", "threshold"}));
  demo->add_option("--n", n_list, "gap: comma-separated n values");
  demo->add_option("--kappa", kappa_list, "gap: comma-separated kappa values");
  demo->add_option("--nu", nu_list, "threshold: comma-separated nu values");
  demo->callback([&] { action = [&] { return run_demo(g, demo_which, n_list, kappa_list, nu_list); }; });

  std::string bound_kind;
  std::vector<std::string> bound_assigns;
  bool list_bounds = false;
  auto* bound = app.add_subcommand("bound", "Evaluate a closed-form bound");
  bound->add_option("kind", bound_kind, "Bound kind");
  bound->add_option("params", bound_assigns, "name=value ...");
  bound->add_flag("--list", list_bounds, "List bound kinds");
  bound->callback([&] { action = [&] { return run_bound(g, bound_kind, bound_assigns, list_bounds); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return action ? action() : 2;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
  } catch (const ResourceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
  } catch (const UnsupportedRegimeError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
  } catch (const ContractError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
  }
  return 2;
}

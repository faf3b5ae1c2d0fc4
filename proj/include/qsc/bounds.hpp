#pragma once

// Registry of closed-form bound expressions. Each kind takes a named
// parameter map and returns a value tagged with its native unit.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "qsc/combinatorics.hpp"
#include "qsc/errors.hpp"
#include "qsc/infotheory.hpp"

namespace qsc {

enum class Unit { bits, nats, probability, count, absolute };

inline std::string to_string(Unit u) {
  switch (u) {
    case Unit::bits: return "bits";
    case Unit::nats: return "nats";
    case Unit::probability: return "probability";
    case Unit::count: return "count";
    case Unit::absolute: return "absolute";
  }
  return "?";
}

inline Unit unit_from_string(const std::string& s) {
  for (Unit u : {Unit::bits, Unit::nats, Unit::probability, Unit::count, Unit::absolute})
    if (to_string(u) == s) return u;
  throw DomainError("unknown unit '" + s + "'");
}

using BoundParams = std::map<std::string, double>;

struct BoundValue {
  std::string kind;
  BoundParams params;
  double value = 0.0;
  Unit unit = Unit::bits;
};

struct BoundKindInfo {
  std::vector<std::string> params;
  Unit unit;
  std::string summary;
  std::function<double(const BoundParams&)> eval;
};

namespace detail {

inline double get(const BoundParams& p, const std::string& key) {
  const auto it = p.find(key);
  if (it == p.end()) throw DomainError("missing parameter '" + key + "'");
  if (!std::isfinite(it->second)) throw DomainError("parameter '" + key + "' is not finite");
  return it->second;
}

inline void need(bool ok, const std::string& what) {
  if (!ok) throw DomainError("out of range: " + what);
}

inline bool is_integer(double x) { return std::floor(x) == x; }

inline double log2_binom_d(double n, double k) {
  return log2_binom(static_cast<unsigned long>(n), static_cast<unsigned long>(k)).log2_magnitude();
}

inline double min_exp_term(double c) { return std::min(std::exp(-2.0 * c), std::exp(-c / 3.0)); }

// c = (t - k ln m)/n: the offset that makes t = k ln m + c n.
inline double coupon_offset(double n, double m, double t) { return (t - (n - m) * std::log(m)) / n; }

inline bool expct_ub_hypotheses(double n, double m, double c) {
  return m >= 1 && 40 * m <= n && m * std::log(m) <= std::abs(c) * n / 10.0;
}

inline bool lmlst_hypotheses(double n, double m, double c) {
  return c >= 0 && m >= 1 && 40 * m <= n && m * std::log(m) <= c * n / 10.0;
}

inline double qcc_c0(double delta) { return 0.5 * std::log((1.0 - delta) / (32.0 * delta)); }

inline std::map<std::string, BoundKindInfo> build_registry() {
  using std::exp;
  using std::log;
  using std::log2;
  const double log2e = std::numbers::log2e;
  std::map<std::string, BoundKindInfo> r;

  r["pac_mi_lb"] = {{"d"}, Unit::bits, "(1 - h(3/8)) d", [](const BoundParams& p) {
                      const double d = get(p, "d");
                      need(d >= 1, "d >= 1");
                      return (1.0 - binary_entropy(0.375)) * d;
                    }};
  r["pac_entropy_lemma"] = {{"d", "nu"}, Unit::bits, "d h(6 nu) + d exp(-2 nu d), nu <= 1/12",
                            [](const BoundParams& p) {
                              const double d = get(p, "d"), nu = get(p, "nu");
                              need(d >= 1, "d >= 1");
                              need(nu > 0 && nu <= 1.0 / 12.0, "0 < nu <= 1/12");
                              return d * binary_entropy(6.0 * nu) + d * exp(-2.0 * nu * d);
                            }};
  r["pac_entropy_ub"] = {{"d", "nu"}, Unit::bits, "log2(d+1) + d h(6 nu) + d exp(-2 nu d)",
                         [](const BoundParams& p) {
                           const double d = get(p, "d"), nu = get(p, "nu");
                           need(d >= 1, "d >= 1");
                           need(nu > 0 && nu <= 1.0 / 12.0, "0 < nu <= 1/12");
                           return log2(d + 1) + d * binary_entropy(6.0 * nu) + d * exp(-2.0 * nu * d);
                         }};
  r["agnostic_entropy_tail"] = {{"d", "alpha", "t"}, Unit::bits,
                                "log2(d+1) + log2 C(d, 3 alpha t/2) + d exp(-alpha t/10), 3 alpha t/2 <= d/2",
                                [](const BoundParams& p) {
                                  const double d = get(p, "d"), a = get(p, "alpha"), t = get(p, "t");
                                  need(d >= 1, "d >= 1");
                                  need(a > 0 && a <= 0.5, "0 < alpha <= 1/2");
                                  need(t >= 1, "t >= 1");
                                  const double x = 1.5 * a * t;
                                  need(x <= d / 2.0, "3 alpha t/2 <= d/2");
                                  return log2(d + 1) + log2_binom_real(d, x) + d * exp(-a * t / 10.0);
                                }};
  r["agnostic_entropy_ub"] = {{"d", "nu"}, Unit::bits, "log2(d+1) + d h(3 nu/4) + 1, 0 < nu < 1/2",
                              [](const BoundParams& p) {
                                const double d = get(p, "d"), nu = get(p, "nu");
                                need(d >= 1, "d >= 1");
                                need(nu > 0 && nu < 0.5, "0 < nu < 1/2");
                                return log2(d + 1) + d * binary_entropy(0.75 * nu) + 1.0;
                              }};
  r["mi_ub_c0"] = {{"c"}, Unit::probability, "1 - exp(-2c)", [](const BoundParams& p) {
                     const double c = get(p, "c");
                     need(c > 0, "c > 0");
                     return 1.0 - exp(-2.0 * c);
                   }};
  r["mi_ub"] = {{"n", "k", "delta", "c"}, Unit::bits, "(1 - delta (1 - exp(-2c))) log2 C(n,k)",
                [](const BoundParams& p) {
                  const double n = get(p, "n"), k = get(p, "k"), delta = get(p, "delta"), c = get(p, "c");
                  need(is_integer(n) && is_integer(k) && k >= 1 && k < n, "1 <= k < n integers");
                  need(delta > 0 && delta <= 0.25, "0 < delta <= 1/4");
                  need(c > 0, "c > 0");
                  return (1.0 - delta * (1.0 - exp(-2.0 * c))) * log2_binom_d(n, k);
                }};
  r["verify_accept"] = {{"d", "k", "c"}, Unit::probability, "(1 - d/k)^(2ck)", [](const BoundParams& p) {
                          const double d = get(p, "d"), k = get(p, "k"), c = get(p, "c");
                          need(k >= 1 && d >= 0 && d <= k, "0 <= d <= k");
                          need(c > 0, "c > 0");
                          return std::pow(1.0 - d / k, 2.0 * c * k);
                        }};
  r["verify_accept_ub"] = {{"d", "c"}, Unit::probability, "exp(-2cd)", [](const BoundParams& p) {
                             const double d = get(p, "d"), c = get(p, "c");
                             need(d >= 0 && c > 0, "d >= 0, c > 0");
                             return exp(-2.0 * c * d);
                           }};
  r["miab_lb"] = {{"n", "m", "kappa"}, Unit::bits, "(1 - exp(-kappa) - kappa m/n) log2 C(n,m) - 1",
                  [](const BoundParams& p) {
                    const double n = get(p, "n"), m = get(p, "m"), kappa = get(p, "kappa");
                    need(is_integer(n) && is_integer(m), "integer n, m");
                    need(m >= 2 && 10 * m <= n, "2 <= m <= n/10");
                    need(kappa > 0 && kappa < n / m, "0 < kappa < n/m");
                    return (1.0 - exp(-kappa) - kappa * m / n) * log2_binom_d(n, m) - 1.0;
                  }};
  r["miab_ub"] = {{"n", "m", "c"}, Unit::bits,
                  "log2 C(n,m) - (log2 n - log2 m - (2m/n) log2 e) min{e^-2c, e^-c/3} + log2(m+1)",
                  [log2e](const BoundParams& p) {
                    const double n = get(p, "n"), m = get(p, "m"), c = get(p, "c");
                    need(is_integer(n) && is_integer(m), "integer n, m");
                    need(expct_ub_hypotheses(n, m, c), "1 <= m <= n/40, m ln m <= |c| n/10");
                    const double slope = log2(n) - log2(m) - 2.0 * m / n * log2e;
                    return log2_binom_d(n, m) - slope * min_exp_term(c) + log2(m + 1);
                  }};
  r["mismatch_mi_floor"] = {{"n", "m", "k", "Delta"}, Unit::bits,
                            "log2 C(n,m) - Delta (log2 k + log2 m) - log2(m+1)", [](const BoundParams& p) {
                              const double n = get(p, "n"), m = get(p, "m"), k = get(p, "k"),
                                           delta = get(p, "Delta");
                              need(is_integer(n) && is_integer(m) && is_integer(k), "integer n, m, k");
                              need(m >= 1 && k >= 1 && m + k == n, "m, k >= 1, m + k = n");
                              need(delta >= 0, "Delta >= 0");
                              return log2_binom_d(n, m) - delta * (log2(k) + log2(m)) - log2(m + 1);
                            }};
  r["mm_bds_lhs"] = {{"n", "alpha", "c", "Delta"}, Unit::bits,
                     "-((1-alpha) log2 n - 2 n^(alpha-1) log2 e) min{} + 2 alpha log2 n + 2 + alpha Delta log2 n",
                     [log2e](const BoundParams& p) {
                       const double n = get(p, "n"), a = get(p, "alpha"), c = get(p, "c"), delta = get(p, "Delta");
                       need(n >= 2, "n >= 2");
                       need(a > 0 && a < 1, "0 < alpha < 1");
                       need(delta >= 0, "Delta >= 0");
                       const double ln = log2(n);
                       const double slope = (1.0 - a) * ln - 2.0 / std::pow(n, 1.0 - a) * log2e;
                       return -slope * min_exp_term(c) + 2.0 * a * ln + 2.0 + a * delta * ln;
                     }};
  r["mm_bds_rhs"] = {{"n", "Delta"}, Unit::bits, "-Delta log2 n", [](const BoundParams& p) {
                       const double n = get(p, "n"), delta = get(p, "Delta");
                       need(n >= 2 && delta >= 0, "n >= 2, Delta >= 0");
                       return -delta * log2(n);
                     }};
  r["qcc_c0"] = {{"delta"}, Unit::nats, "(1/2) ln((1 - delta)/(32 delta)), 0 < delta <= 1/40",
                 [](const BoundParams& p) {
                   const double delta = get(p, "delta");
                   need(delta > 0 && delta <= 1.0 / 40.0, "0 < delta <= 1/40");
                   return qcc_c0(delta);
                 }};
  r["qcc_hc_vw"] = {{"v", "w"}, Unit::probability, "sqrt(v(1-w)) + sqrt(w(1-v))", [](const BoundParams& p) {
                      const double v = get(p, "v"), w = get(p, "w");
                      need(v >= 0 && v <= 1 && w >= 0 && w <= 1, "v, w in [0, 1]");
                      return std::sqrt(v * (1.0 - w)) + std::sqrt(w * (1.0 - v));
                    }};
  r["qcc_hc_mid"] = {{"c", "w"}, Unit::probability, "(1 - e^-2c/2)^(1/2) sqrt(1-w) + (w e^-2c/2)^(1/2)",
                     [](const BoundParams& p) {
                       const double c = get(p, "c"), w = get(p, "w");
                       need(c >= 0 && w >= 0 && w <= 1, "c >= 0, w in [0, 1]");
                       const double e = exp(-2.0 * c);
                       return std::sqrt(1.0 - e / 2.0) * std::sqrt(1.0 - w) + std::sqrt(w * e / 2.0);
                     }};
  r["qcc_hc_ub"] = {{"c"}, Unit::probability, "1 - e^-2c/8", [](const BoundParams& p) {
                      const double c = get(p, "c");
                      need(c >= 0, "c >= 0");
                      return 1.0 - exp(-2.0 * c) / 8.0;
                    }};
  r["cor_qcc_threshold"] = {{"delta"}, Unit::nats, "min{c0/20, delta ln 2}", [](const BoundParams& p) {
                              const double delta = get(p, "delta");
                              need(delta > 0 && delta <= 1.0 / 40.0, "0 < delta <= 1/40");
                              return std::min(qcc_c0(delta) / 20.0, delta * std::numbers::ln2);
                            }};
  r["expct_ub"] = {{"n", "m", "c"}, Unit::count, "m - min{e^-2c, e^-c/3}", [](const BoundParams& p) {
                     const double n = get(p, "n"), m = get(p, "m"), c = get(p, "c");
                     need(expct_ub_hypotheses(n, m, c), "1 <= m <= n/40, m ln m <= |c| n/10");
                     return m - min_exp_term(c);
                   }};
  r["expct_lb"] = {{"n", "m", "c"}, Unit::count, "m (1 - e^-c - c m/n)", [](const BoundParams& p) {
                     const double n = get(p, "n"), m = get(p, "m"), c = get(p, "c");
                     need(c >= 0, "c >= 0");
                     need(m >= 2 && 10 * m <= n, "2 <= m <= n/10");
                     return m * (1.0 - exp(-c) - c * m / n);
                   }};
  r["lmlst_lb"] = {{"n", "m", "t", "c"}, Unit::probability, "(1 - t m^2/n^2)(1 - e^(-9c/10))",
                   [](const BoundParams& p) {
                     const double n = get(p, "n"), m = get(p, "m"), t = get(p, "t"), c = get(p, "c");
                     need(lmlst_hypotheses(n, m, c) && m >= 2, "c >= 0, 2 <= m <= n/40, m ln m <= c n/10");
                     return (1.0 - t * m * m / (n * n)) * (1.0 - exp(-0.9 * c));
                   }};
  r["lmlst_ub"] = {{"n", "m", "c"}, Unit::probability, "1 - e^-2c/2", [](const BoundParams& p) {
                     const double n = get(p, "n"), m = get(p, "m"), c = get(p, "c");
                     need(lmlst_hypotheses(n, m, c), "c >= 0, 1 <= m <= n/40, m ln m <= c n/10");
                     return 1.0 - exp(-2.0 * c) / 2.0;
                   }};
  r["frac_rhs"] = {{"n", "m", "c"}, Unit::nats, "ln m + max{2c, c/3}", [](const BoundParams& p) {
                     const double n = get(p, "n"), m = get(p, "m"), c = get(p, "c");
                     need(expct_ub_hypotheses(n, m, c), "1 <= m <= n/40, m ln m <= |c| n/10");
                     return log(m) + std::max(2.0 * c, c / 3.0);
                   }};
  r["fano"] = {{"err", "alphabet"}, Unit::bits, "h(err) + err log2(alphabet - 1)", [](const BoundParams& p) {
                 const double a = get(p, "alphabet");
                 need(is_integer(a) && a >= 2, "integer alphabet >= 2");
                 return fano_bound(get(p, "err"), static_cast<unsigned long>(a));
               }};
  r["helstrom"] = {{"overlap", "t"}, Unit::probability, "1/2 + 1/2 sqrt(1 - overlap^(2t))",
                   [](const BoundParams& p) {
                     const double t = get(p, "t");
                     need(is_integer(t) && t >= 1, "integer t >= 1");
                     return helstrom_pair(get(p, "overlap"), static_cast<unsigned>(t));
                   }};
  r["chernoff"] = {{"delta", "mu"}, Unit::probability, "exp(-delta^2 mu/(2 + delta))", [](const BoundParams& p) {
                     return chernoff_mult_bound(get(p, "delta"), get(p, "mu")).bound;
                   }};
  r["binomial_half"] = {{"n", "k"}, Unit::probability, "2^(-(1 - h(k/n)) n)", [](const BoundParams& p) {
                          const double n = get(p, "n"), k = get(p, "k");
                          need(is_integer(n) && is_integer(k) && n >= 1 && k >= 0, "integer n >= 1, k >= 0");
                          return binomial_half_bound(static_cast<unsigned long>(n), static_cast<unsigned long>(k)).bound;
                        }};
  return r;
}

}  // namespace detail

inline const std::map<std::string, BoundKindInfo>& bound_registry() {
  static const auto reg = detail::build_registry();
  return reg;
}

inline BoundValue bound_value(const std::string& kind, const BoundParams& params) {
  const auto& reg = bound_registry();
  const auto it = reg.find(kind);
  if (it == reg.end()) throw DomainError("unknown bound kind '" + kind + "'");
  BoundValue out{kind, params, it->second.eval(params), it->second.unit};
  if (!std::isfinite(out.value)) throw DomainError("bound '" + kind + "' is not finite at these parameters");
  return out;
}

}  // namespace qsc

#pragma once

// Parameter grids. Text grammar, one assignment per line, '#' starts a comment:
//
//   name = value
//   name = [v1, v2, ...]
//   name = start..end          (step 1)
//   name = start..end..step
//
// Values are exact rationals ("3", "1/8", "0.25", "1e-3"). Points are the
// cartesian product, enumerated with names in lexicographic order and each
// value list ascending.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qsc/errors.hpp"
#include "qsc/exact.hpp"

namespace qsc {

using GridPoint = std::map<std::string, Rational>;

struct GridSpec {
  std::map<std::string, std::vector<Rational>> params;

  bool has(const std::string& name) const { return params.count(name) != 0; }

  void set(const std::string& name, std::vector<Rational> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (values.empty()) throw UsageError("grid parameter '" + name + "' has no values");
    params[name] = std::move(values);
  }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& [name, vals] : params) n *= vals.size();
    return params.empty() ? 0 : n;
  }

  std::vector<GridPoint> points() const {
    std::vector<GridPoint> out;
    if (params.empty()) return out;
    std::vector<std::size_t> idx(params.size(), 0);
    std::vector<const std::pair<const std::string, std::vector<Rational>>*> keys;
    for (const auto& kv : params) keys.push_back(&kv);
    while (true) {
      GridPoint p;
      for (std::size_t i = 0; i < keys.size(); ++i) p[keys[i]->first] = keys[i]->second[idx[i]];
      out.push_back(std::move(p));
      std::size_t pos = keys.size();
      while (pos > 0) {
        --pos;
        if (++idx[pos] < keys[pos]->second.size()) break;
        idx[pos] = 0;
        if (pos == 0) return out;
      }
    }
  }

  /// "n=[3..8] (6), t=[1..10] (10)"
  std::string summary() const {
    std::string s;
    for (const auto& [name, vals] : params) {
      if (!s.empty()) s += ", ";
      s += name + "=";
      if (vals.size() == 1)
        s += to_string(vals.front());
      else
        s += "[" + to_string(vals.front()) + ".." + to_string(vals.back()) + "] (" + std::to_string(vals.size()) + ")";
    }
    return s;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, const std::string& sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + sep.size();
  }
}

constexpr std::size_t kMaxGridValues = 1000000;

inline std::vector<Rational> parse_grid_values(const std::string& rhs, const std::string& where) {
  auto fail = [&](const std::string& why) { return UsageError(where + ": " + why); };
  std::vector<Rational> vals;
  if (rhs.empty()) throw fail("missing value");
  if (rhs.front() == '[') {
    if (rhs.back() != ']') throw fail("unterminated list");
    const std::string body = trim(rhs.substr(1, rhs.size() - 2));
    if (body.empty()) throw fail("empty list");
    for (const auto& item : split(body, ",")) vals.push_back(parse_rational(trim(item)));
    return vals;
  }
  if (rhs.find("..") != std::string::npos) {
    const auto parts = split(rhs, "..");
    if (parts.size() < 2 || parts.size() > 3) throw fail("range must be start..end or start..end..step");
    const Rational a = parse_rational(trim(parts[0])), b = parse_rational(trim(parts[1]));
    const Rational step = parts.size() == 3 ? parse_rational(trim(parts[2])) : Rational(1);
    if (step <= 0) throw fail("range step must be positive");
    if (b < a) throw fail("range end precedes start");
    for (Rational x = a; x <= b; x += step) {
      vals.push_back(x);
      if (vals.size() > kMaxGridValues) throw fail("range has too many values");
    }
    return vals;
  }
  vals.push_back(parse_rational(rhs));
  return vals;
}

}  // namespace detail

inline GridSpec parse_grid(const std::string& text, const std::string& source = "grid") {
  GridSpec g;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(where + ": expected 'name = value'");
    const std::string name = detail::trim(line.substr(0, eq));
    if (name.empty() || name.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_") !=
                            std::string::npos)
      throw UsageError(where + ": bad parameter name '" + name + "'");
    if (g.has(name)) throw UsageError(where + ": parameter '" + name + "' given twice");
    g.set(name, detail::parse_grid_values(detail::trim(line.substr(eq + 1)), where));
  }
  return g;
}

inline GridSpec load_grid(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read grid file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_grid(ss.str(), path);
}

/// Grid text for a spec; parse_grid(to_text(g)) reproduces g.
inline std::string to_text(const GridSpec& g) {
  std::string s;
  for (const auto& [name, vals] : g.params) {
    s += name + " = ";
    if (vals.size() == 1) {
      s += to_string(vals.front());
    } else {
      s += "[";
      for (std::size_t i = 0; i < vals.size(); ++i) s += (i ? ", " : "") + to_string(vals[i]);
      s += "]";
    }
    s += "\n";
  }
  return s;
}

// Point accessors.

inline const Rational& point_value(const GridPoint& p, const std::string& name) {
  const auto it = p.find(name);
  if (it == p.end()) throw UsageError("grid point lacks parameter '" + name + "'");
  return it->second;
}

inline unsigned point_uint(const GridPoint& p, const std::string& name) {
  const Rational& v = point_value(p, name);
  if (v.get_den() != 1 || v < 0 || v > 4000000000.0)
    throw UsageError("parameter '" + name + "' must be a non-negative integer");
  return static_cast<unsigned>(v.get_num().get_ui());
}

inline double point_double(const GridPoint& p, const std::string& name) { return point_value(p, name).get_d(); }

inline std::string point_label(const GridPoint& p) {
  std::string s;
  for (const auto& [k, v] : p) s += (s.empty() ? "" : " ") + k + "=" + to_string(v);
  return s;
}

}  // namespace qsc

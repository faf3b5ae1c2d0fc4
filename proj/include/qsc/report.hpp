#pragma once

// Report emission and parsing.
//
// Floats are written with 17 significant digits (CSV) or nlohmann's shortest
// round-trip form (JSON); non-finite values are written as the strings
// "nan", "inf", "-inf". Exact rationals are written as "p/q". runtime_ms is
// emitted only on request so that default reports are byte-deterministic.
//
// Verification CSV layout:
//   # key: value            summary lines (hypothesis and note may repeat)
//   index,status,margin,reason,p:<param>...,v:<value>...
//   one row per point in canonical order; empty cells are absent values

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsc/demo.hpp"
#include "qsc/errors.hpp"
#include "qsc/exact.hpp"
#include "qsc/verify.hpp"

namespace qsc {

using Json = nlohmann::ordered_json;

inline bool operator==(const PointRecord& a, const PointRecord& b) {
  return a.point == b.point && a.status == b.status && a.margin == b.margin && a.reason == b.reason &&
         a.values == b.values;
}

inline bool operator==(const VerificationReport& a, const VerificationReport& b) {
  return a.lemma_id == b.lemma_id && a.grid_summary == b.grid_summary && a.hypotheses == b.hypotheses &&
         a.points_total == b.points_total && a.points_skipped == b.points_skipped &&
         a.points_checked == b.points_checked && a.points_passed == b.points_passed &&
         a.worst_margin == b.worst_margin && a.margin_unit == b.margin_unit && a.tolerance == b.tolerance &&
         a.witness == b.witness && a.runtime_ms == b.runtime_ms && a.seed == b.seed && a.notes == b.notes &&
         a.points == b.points;
}

// ---- scalar formatting ----------------------------------------------------

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw UsageError("bad number '" + s + "'");
  return v;
}

inline Json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

inline double json_to_double(const Json& j) {
  if (j.is_string()) return parse_double(j.get<std::string>());
  return j.get<double>();
}

// ---- CSV primitives -------------------------------------------------------

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw UsageError("unterminated quoted CSV field");
  out.push_back(std::move(cur));
  return out;
}

inline std::string csv_row(const std::vector<std::string>& fields) {
  std::string s;
  for (std::size_t i = 0; i < fields.size(); ++i) s += (i ? "," : "") + csv_field(fields[i]);
  return s + "\n";
}

// ---- verification reports -------------------------------------------------

inline Json to_json(const VerificationReport& r, bool timing = false) {
  Json j;
  j["lemma_id"] = r.lemma_id;
  j["grid"] = r.grid_summary;
  j["hypotheses"] = r.hypotheses;
  j["points_total"] = r.points_total;
  j["points_skipped"] = r.points_skipped;
  j["points_checked"] = r.points_checked;
  j["points_passed"] = r.points_passed;
  j["all_passed"] = r.all_passed();
  j["worst_margin"] = json_number(r.worst_margin);
  j["margin_unit"] = to_string(r.margin_unit);
  j["tolerance"] = json_number(r.tolerance);
  j["witness"] = r.witness;
  j["seed"] = r.seed;
  j["notes"] = r.notes;
  if (timing) j["runtime_ms"] = json_number(r.runtime_ms);
  Json pts = Json::array();
  for (const auto& p : r.points) {
    Json jp;
    Json params = Json::object();
    for (const auto& [k, v] : p.point) params[k] = to_string(v);
    jp["point"] = params;
    jp["status"] = p.status;
    jp["margin"] = json_number(p.margin);
    if (!p.reason.empty()) jp["reason"] = p.reason;
    Json vals = Json::object();
    for (const auto& [k, v] : p.values) vals[k] = json_number(v);
    jp["values"] = vals;
    pts.push_back(std::move(jp));
  }
  j["points"] = std::move(pts);
  return j;
}

inline VerificationReport report_from_json(const Json& j) {
  try {
    VerificationReport r;
    r.lemma_id = j.at("lemma_id").get<std::string>();
    r.grid_summary = j.at("grid").get<std::string>();
    r.hypotheses = j.at("hypotheses").get<std::vector<std::string>>();
    r.points_total = j.at("points_total").get<std::size_t>();
    r.points_skipped = j.at("points_skipped").get<std::size_t>();
    r.points_checked = j.at("points_checked").get<std::size_t>();
    r.points_passed = j.at("points_passed").get<std::size_t>();
    r.worst_margin = json_to_double(j.at("worst_margin"));
    r.margin_unit = unit_from_string(j.at("margin_unit").get<std::string>());
    r.tolerance = json_to_double(j.at("tolerance"));
    r.witness = j.at("witness").get<std::map<std::string, std::string>>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.notes = j.at("notes").get<std::vector<std::string>>();
    if (j.contains("runtime_ms")) r.runtime_ms = json_to_double(j.at("runtime_ms"));
    for (const auto& jp : j.at("points")) {
      PointRecord p;
      for (const auto& [k, v] : jp.at("point").items()) p.point[k] = parse_rational(v.get<std::string>());
      p.status = jp.at("status").get<std::string>();
      p.margin = json_to_double(jp.at("margin"));
      if (jp.contains("reason")) p.reason = jp.at("reason").get<std::string>();
      for (const auto& [k, v] : jp.at("values").items()) p.values[k] = json_to_double(v);
      r.points.push_back(std::move(p));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed report JSON: ") + e.what());
  }
}

inline std::string to_csv(const VerificationReport& r, bool timing = false) {
  std::ostringstream out;
  auto kv = [&](const std::string& k, const std::string& v) { out << "# " << k << ": " << v << "\n"; };
  kv("lemma_id", r.lemma_id);
  kv("grid", r.grid_summary);
  for (const auto& h : r.hypotheses) kv("hypothesis", h);
  kv("points_total", std::to_string(r.points_total));
  kv("points_skipped", std::to_string(r.points_skipped));
  kv("points_checked", std::to_string(r.points_checked));
  kv("points_passed", std::to_string(r.points_passed));
  kv("all_passed", r.all_passed() ? "true" : "false");
  kv("worst_margin", format_double(r.worst_margin));
  kv("margin_unit", to_string(r.margin_unit));
  kv("tolerance", format_double(r.tolerance));
  std::string w;
  for (const auto& [k, v] : r.witness) w += (w.empty() ? "" : " ") + k + "=" + v;
  kv("witness", w);
  kv("seed", std::to_string(r.seed));
  for (const auto& n : r.notes) kv("note", n);
  if (timing) kv("runtime_ms", format_double(r.runtime_ms));

  std::set<std::string> pnames, vnames;
  for (const auto& p : r.points) {
    for (const auto& [k, v] : p.point) pnames.insert(k);
    for (const auto& [k, v] : p.values) vnames.insert(k);
  }
  std::vector<std::string> header{"index", "status", "margin", "reason"};
  for (const auto& k : pnames) header.push_back("p:" + k);
  for (const auto& k : vnames) header.push_back("v:" + k);
  out << csv_row(header);
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    const auto& p = r.points[i];
    std::vector<std::string> row{std::to_string(i), p.status, p.status == "skip" ? "" : format_double(p.margin),
                                 p.reason};
    for (const auto& k : pnames) row.push_back(p.point.count(k) ? to_string(p.point.at(k)) : "");
    for (const auto& k : vnames) row.push_back(p.values.count(k) ? format_double(p.values.at(k)) : "");
    out << csv_row(row);
  }
  return out.str();
}

inline VerificationReport report_from_csv(const std::string& text) {
  VerificationReport r;
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  auto num = [](const std::string& s) { return static_cast<std::size_t>(std::stoull(s)); };
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto colon = line.find(": ");
      const std::string key = line.substr(2, colon == std::string::npos ? std::string::npos : colon - 2);
      const std::string val = colon == std::string::npos ? "" : line.substr(colon + 2);
      if (key == "lemma_id") r.lemma_id = val;
      else if (key == "grid") r.grid_summary = val;
      else if (key == "hypothesis") r.hypotheses.push_back(val);
      else if (key == "points_total") r.points_total = num(val);
      else if (key == "points_skipped") r.points_skipped = num(val);
      else if (key == "points_checked") r.points_checked = num(val);
      else if (key == "points_passed") r.points_passed = num(val);
      else if (key == "worst_margin") r.worst_margin = parse_double(val);
      else if (key == "margin_unit") r.margin_unit = unit_from_string(val);
      else if (key == "tolerance") r.tolerance = parse_double(val);
      else if (key == "seed") r.seed = std::stoull(val);
      else if (key == "note") r.notes.push_back(val);
      else if (key == "runtime_ms") r.runtime_ms = parse_double(val);
      else if (key == "witness") {
        std::istringstream ws(val);
        std::string tok;
        while (ws >> tok) {
          const auto eq = tok.find('=');
          if (eq == std::string::npos) throw UsageError("malformed witness '" + tok + "'");
          r.witness[tok.substr(0, eq)] = tok.substr(eq + 1);
        }
      }
      continue;
    }
    if (line.empty()) continue;
    const auto cells = csv_split(line);
    if (header.empty()) {
      header = cells;
      if (header.size() < 4 || header[0] != "index") throw UsageError("malformed report CSV header");
      continue;
    }
    if (cells.size() != header.size()) throw UsageError("report CSV row has wrong column count");
    PointRecord p;
    p.status = cells[1];
    p.margin = cells[2].empty() ? 0.0 : parse_double(cells[2]);
    p.reason = cells[3];
    for (std::size_t c = 4; c < cells.size(); ++c) {
      if (cells[c].empty()) continue;
      const std::string& h = header[c];
      if (h.rfind("p:", 0) == 0) p.point[h.substr(2)] = parse_rational(cells[c]);
      else if (h.rfind("v:", 0) == 0) p.values[h.substr(2)] = parse_double(cells[c]);
      else throw UsageError("unknown report CSV column '" + h + "'");
    }
    r.points.push_back(std::move(p));
  }
  if (header.empty()) throw UsageError("report CSV has no header row");
  return r;
}

// ---- demos --------------------------------------------------------------

inline Json to_json(const GapDemoReport& r) {
  Json j;
  j["delta"] = to_string(r.delta);
  j["ceiling_factor"] = r.ceiling_factor;
  if (r.first) {
    const auto& f = r.rows[*r.first];
    j["first"] = {{"n", f.n}, {"kappa", to_string(f.kappa)}, {"gamma", f.gamma}, {"margin_bits", f.margin}};
  } else {
    j["first"] = nullptr;
  }
  j["kappa_star"] = r.kappa_star ? Json(to_string(*r.kappa_star)) : Json(nullptr);
  j["trend_monotone_n"] = r.trend_monotone_n;
  j["monotone_kappa"] = r.monotone_kappa;
  j["ok"] = r.ok();
  j["notes"] = r.notes;
  Json rows = Json::array();
  for (const auto& x : r.rows) {
    Json jr{{"n", x.n},
            {"m", x.m},
            {"kappa", to_string(x.kappa)},
            {"t", x.t},
            {"entropy_bits", json_number(x.entropy)},
            {"log2_binom", json_number(x.log2_binom)},
            {"gamma", json_number(x.gamma)},
            {"ceiling_bits", json_number(x.ceiling)},
            {"margin_bits", json_number(x.margin)}};
    jr["floor_bits"] = x.floor ? json_number(*x.floor) : Json(nullptr);
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  return j;
}

inline std::string to_csv(const GapDemoReport& r) {
  std::ostringstream out;
  out << "# delta: " << to_string(r.delta) << "\n";
  out << "# ceiling_factor: " << format_double(r.ceiling_factor) << "\n";
  if (r.first) {
    const auto& f = r.rows[*r.first];
    out << "# first: n=" << f.n << " kappa=" << to_string(f.kappa) << " gamma=" << format_double(f.gamma)
        << " margin_bits=" << format_double(f.margin) << "\n";
  } else {
    out << "# first: none\n";
  }
  out << "# kappa_star: " << (r.kappa_star ? to_string(*r.kappa_star) : "none") << "\n";
  out << "# trend_monotone_n: " << (r.trend_monotone_n ? "true" : "false") << "\n";
  out << "# monotone_kappa: " << (r.monotone_kappa ? "true" : "false") << "\n";
  for (const auto& n : r.notes) out << "# note: " << n << "\n";
  out << "n,m,kappa,t,entropy_bits,log2_binom,gamma,ceiling_bits,margin_bits,floor_bits\n";
  for (const auto& x : r.rows)
    out << csv_row({std::to_string(x.n), std::to_string(x.m), to_string(x.kappa), std::to_string(x.t),
                    format_double(x.entropy), format_double(x.log2_binom), format_double(x.gamma),
                    format_double(x.ceiling), format_double(x.margin), x.floor ? format_double(*x.floor) : ""});
  return out.str();
}

inline Json to_json(const ThresholdReport& r) {
  Json j;
  j["d_max_bound"] = r.d_max_bound;
  j["d_max_entropy"] = r.d_max_entropy;
  Json rows = Json::array();
  for (const auto& x : r.rows)
    rows.push_back({{"eps", to_string(x.eps)},
                    {"nu", x.nu},
                    {"d_bound", x.d_bound ? Json(*x.d_bound) : Json(nullptr)},
                    {"d_entropy", x.d_entropy ? Json(*x.d_entropy) : Json(nullptr)}});
  j["rows"] = std::move(rows);
  return j;
}

inline std::string to_csv(const ThresholdReport& r) {
  std::ostringstream out;
  out << "# d_max_bound: " << r.d_max_bound << "\n# d_max_entropy: " << r.d_max_entropy << "\n";
  out << "eps,nu,d_bound,d_entropy\n";
  for (const auto& x : r.rows)
    out << csv_row({to_string(x.eps), format_double(x.nu), x.d_bound ? std::to_string(*x.d_bound) : "",
                    x.d_entropy ? std::to_string(*x.d_entropy) : ""});
  return out.str();
}

}  // namespace qsc

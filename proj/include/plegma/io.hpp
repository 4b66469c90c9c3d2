#pragma once

// Serialization: JSON round-trips for the core value types and certificates,
// canonical CSV for tabular results, and a small deterministic SVG chart
// writer fed from the CSV form.  All output is byte-stable: no timestamps,
// no pointers, no locale-dependent formatting (rationals travel as exact
// "p/q" strings, doubles through a fixed shortest-round-trip printer).

#include <charconv>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "plegma/engines.hpp"
#include "plegma/fin_subset.hpp"
#include "plegma/ramsey.hpp"
#include "plegma/rational.hpp"
#include "plegma/schreier_norm.hpp"
#include "plegma/smlab.hpp"
#include "plegma/sparse_vec.hpp"
#include "plegma/tree.hpp"
#include "plegma/tsirelson.hpp"

namespace plegma {

using nlohmann::json;

// Shortest decimal that round-trips the double; stable across runs.
inline std::string double_repr(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

// ---------------------------------------------------------------------------
// JSON: core values
// ---------------------------------------------------------------------------

inline json to_json(const Rational& r) { return r.to_string(); }
inline Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  return Rational::parse(j.get<std::string>());
}

inline json to_json(const FinSubset& s) {
  json a = json::array();
  for (int x : s) a.push_back(x);
  return a;
}
inline FinSubset finsubset_from_json(const json& j) {
  std::vector<int> xs;
  for (const auto& v : j) xs.push_back(v.get<int>());
  return FinSubset(std::move(xs));
}

inline json to_json(const PlegmaTuple& t) {
  json a = json::array();
  for (const FinSubset& s : t) a.push_back(to_json(s));
  return a;
}
inline PlegmaTuple plegma_tuple_from_json(const json& j) {
  PlegmaTuple t;
  for (const auto& v : j) t.push_back(finsubset_from_json(v));
  return t;
}

inline json to_json(const Universe& u) {
  json j;
  if (u.is_initial_segment()) {
    j["kind"] = "initial";
    j["n"] = u.size();
  } else {
    j["kind"] = "explicit";
    j["elements"] = u.elements();
  }
  return j;
}
inline Universe universe_from_json(const json& j) {
  if (j.at("kind") == "initial") return Universe::initial_segment(j.at("n").get<int>());
  return Universe::explicit_set(j.at("elements").get<std::vector<int>>());
}

inline json to_json(const IntVec& x) {
  json a = json::array();
  for (const auto& [i, v] : x) a.push_back(json::array({i, v.to_string()}));
  return a;
}
inline IntVec intvec_from_json(const json& j) {
  IntVec x;
  for (const auto& e : j) x.set(e.at(0).get<int>(), rational_from_json(e.at(1)));
  return x;
}

inline json to_json(const SubsetVec& x) {
  json a = json::array();
  for (const auto& [s, v] : x) a.push_back(json::array({to_json(s), v.to_string()}));
  return a;
}
inline SubsetVec subsetvec_from_json(const json& j) {
  SubsetVec x;
  for (const auto& e : j)
    x.set(finsubset_from_json(e.at(0)), rational_from_json(e.at(1)));
  return x;
}

// ---------------------------------------------------------------------------
// JSON: configs and certificates
// ---------------------------------------------------------------------------

inline json to_json(const TsirelsonConfig& c) {
  return json{{"m", c.m}, {"n", c.n}};
}
inline TsirelsonConfig tsirelson_config_from_json(const json& j) {
  TsirelsonConfig c;
  c.m = j.at("m").get<std::vector<long long>>();
  c.n = j.at("n").get<std::vector<long long>>();
  c.validate();
  return c;
}

inline json to_json(const DualCertificate& cert) {
  json fams = json::array();
  for (size_t f = 0; f < cert.families.size(); ++f) {
    json members = json::array();
    for (size_t i = 0; i < cert.families[f].size(); ++i)
      members.push_back(json{{"subset", to_json(cert.families[f][i])},
                             {"sign", cert.signs[f][i]}});
    fams.push_back(json{{"members", members}, {"mass", cert.masses[f].to_string()}});
  }
  return json{{"families", fams}, {"scale", cert.scale.to_string()}};
}

inline json to_json(const TsirelsonCertificate& cert) {
  json nodes = json::array();
  for (const auto& nd : cert.nodes) {
    json levels = json::array();
    for (const auto& lv : nd.levels) {
      json pieces = json::array();
      for (const auto& [a, b] : lv.pieces) pieces.push_back(json::array({a, b}));
      levels.push_back(json{{"level", lv.level}, {"pieces", pieces}});
    }
    nodes.push_back(json{{"a", nd.a}, {"b", nd.b}, {"value", double_repr(nd.value)},
                         {"levels", levels}});
  }
  return json{{"config", to_json(cert.config)},
              {"positions", cert.positions},
              {"nodes", nodes},
              {"lower_bound", double_repr(cert.lo)}};
}

inline json to_json(const CanonicalTreeDecomposition& ctd) {
  json pieces = json::array();
  for (const auto& [t, v] : ctd.y)
    pieces.push_back(json{{"node", to_json(t)}, {"vector", to_json(v)}});
  return json{{"k", ctd.k}, {"universe", to_json(ctd.l)}, {"pieces", pieces}};
}
inline CanonicalTreeDecomposition ctd_from_json(const json& j) {
  CanonicalTreeDecomposition ctd;
  ctd.k = j.at("k").get<int>();
  ctd.l = universe_from_json(j.at("universe"));
  for (const auto& e : j.at("pieces"))
    ctd.y[finsubset_from_json(e.at("node"))] = intvec_from_json(e.at("vector"));
  return ctd;
}

inline json to_json(const TreeMap& tm) {
  json nodes = json::array();
  for (const auto& [t, v] : tm.node)
    nodes.push_back(json{{"node", to_json(t)}, {"vector", to_json(v)}});
  return json{{"k", tm.k}, {"universe", to_json(tm.m)}, {"nodes", nodes}};
}
inline TreeMap tree_map_from_json(const json& j) {
  TreeMap tm;
  tm.k = j.at("k").get<int>();
  tm.m = universe_from_json(j.at("universe"));
  for (const auto& e : j.at("nodes"))
    tm.node[finsubset_from_json(e.at("node"))] = intvec_from_json(e.at("vector"));
  tm.validate();
  return tm;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_table(const std::vector<std::string>& header,
                             const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (size_t i = 0; i < header.size(); ++i)
    out += (i ? "," : "") + csv_field(header[i]);
  out += "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(row[i]);
    out += "\n";
  }
  return out;
}

inline std::string coeffs_repr(const std::vector<Rational>& a) {
  std::string s;
  for (size_t i = 0; i < a.size(); ++i) s += (i ? " " : "") + a[i].to_string();
  return s;
}

inline std::string sm_estimate_csv(const SMEstimate& est) {
  std::vector<std::vector<std::string>> rows;
  for (const CoeffStats& r : est.rows)
    rows.push_back({std::to_string(est.l), std::to_string(est.m), coeffs_repr(r.coeffs),
                    double_repr(r.min_value), double_repr(r.max_value),
                    double_repr(r.mean_value), double_repr(r.width()),
                    std::to_string(r.count)});
  return csv_table({"l", "m", "coeffs", "min", "max", "mean", "width", "count"}, rows);
}

inline std::string cesaro_csv(const CesaroScan& scan) {
  std::vector<std::vector<std::string>> rows;
  for (const CesaroRow& r : scan.rows) {
    rows.push_back({std::to_string(r.n), std::to_string(r.mean_over),
                    r.norm_lo ? double_repr(*r.norm_lo) : "",
                    r.norm_hi ? double_repr(*r.norm_hi) : "",
                    r.functional ? r.functional->to_string() : "",
                    r.analytic ? r.analytic->to_string() : ""});
  }
  return csv_table({"n", "mean_over", "norm_lo", "norm_hi", "functional", "analytic"},
                   rows);
}

inline std::string density_csv(const DensityScanResult& res) {
  std::vector<std::vector<std::string>> rows;
  for (const DensityRow& r : res.rows)
    rows.push_back({std::to_string(r.n), std::to_string(r.total),
                    std::to_string(r.largest_free), r.bound.to_string(),
                    r.dense_enough ? "yes" : "no"});
  return csv_table({"n", "plegma_tuples", "largest_free", "bound", "dense"}, rows);
}

inline std::string stabilize_csv(const StabilizeResult& res) {
  std::vector<std::vector<std::string>> rows;
  for (const StabilizeRow& r : res.rows)
    rows.push_back({std::to_string(r.l), double_repr(r.worst_width),
                    double_repr(r.delta), r.stabilized ? "yes" : "no",
                    std::to_string(r.universe_size)});
  return csv_table({"l", "worst_width", "delta", "stabilized", "universe_size"}, rows);
}

// ---------------------------------------------------------------------------
// SVG from CSV
// ---------------------------------------------------------------------------

// Parse a canonical CSV (as produced above; quoting is honoured) into rows.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
    } else if (c == '\n') {
      row.push_back(field);
      field.clear();
      rows.push_back(row);
      row.clear();
    } else {
      field += c;
    }
  }
  if (!field.empty() || !row.empty()) {
    row.push_back(field);
    rows.push_back(row);
  }
  return rows;
}

// Line chart of selected numeric columns against an x column.  Deterministic:
// fixed size, fixed palette, values printed with double_repr.
inline std::string svg_chart_from_csv(const std::string& csv, size_t x_col,
                                      const std::vector<size_t>& y_cols,
                                      const std::string& title) {
  auto rows = parse_csv(csv);
  if (rows.size() < 2) throw InvalidInput("svg chart: need a header and data rows");
  const double w = 640, h = 400, ml = 60, mr = 20, mt = 40, mb = 40;
  struct Pt {
    double x, y;
  };
  std::vector<std::vector<Pt>> series(y_cols.size());
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() <= x_col) continue;
    char* endp = nullptr;
    double x = std::strtod(rows[r][x_col].c_str(), &endp);
    if (endp == rows[r][x_col].c_str()) continue;
    for (size_t c = 0; c < y_cols.size(); ++c) {
      if (rows[r].size() <= y_cols[c] || rows[r][y_cols[c]].empty()) continue;
      double y = std::strtod(rows[r][y_cols[c]].c_str(), nullptr);
      series[c].push_back({x, y});
      if (first) {
        xmin = xmax = x;
        ymin = ymax = y;
        first = false;
      } else {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    }
  }
  if (first) throw InvalidInput("svg chart: no numeric data in the selected columns");
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
  auto sy = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b"};
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 400\">\n";
  out += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  out += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" + title + "</text>\n";
  out += "<line x1=\"" + double_repr(ml) + "\" y1=\"" + double_repr(h - mb) +
         "\" x2=\"" + double_repr(w - mr) + "\" y2=\"" + double_repr(h - mb) +
         "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + double_repr(ml) + "\" y1=\"" + double_repr(mt) + "\" x2=\"" +
         double_repr(ml) + "\" y2=\"" + double_repr(h - mb) + "\" stroke=\"black\"/>\n";
  out += "<text x=\"" + double_repr(ml - 8) + "\" y=\"" + double_repr(sy(ymin) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
         double_repr(ymin) + "</text>\n";
  out += "<text x=\"" + double_repr(ml - 8) + "\" y=\"" + double_repr(sy(ymax) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
         double_repr(ymax) + "</text>\n";
  out += "<text x=\"" + double_repr(sx(xmin)) + "\" y=\"" + double_repr(h - mb + 16) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
         double_repr(xmin) + "</text>\n";
  out += "<text x=\"" + double_repr(sx(xmax)) + "\" y=\"" + double_repr(h - mb + 16) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
         double_repr(xmax) + "</text>\n";
  for (size_t c = 0; c < series.size(); ++c) {
    if (series[c].empty()) continue;
    out += "<polyline fill=\"none\" stroke=\"";
    out += palette[c % 6];
    out += "\" stroke-width=\"2\" points=\"";
    for (size_t i = 0; i < series[c].size(); ++i) {
      if (i) out += " ";
      out += double_repr(sx(series[c][i].x)) + "," + double_repr(sy(series[c][i].y));
    }
    out += "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace plegma

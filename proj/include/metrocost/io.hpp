#pragma once

// JSON and CSV serialization. Non-finite numbers are written as the strings
// "inf", "-inf" and "nan"; CSV numbers use 17 significant digits.

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "metrocost/catalog.hpp"

namespace metrocost {

using Json = nlohmann::json;

inline Json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw InvalidArgument("expected a number or \"inf\", got " + j.dump());
}

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline Json matrix_to_json(const RMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(json_number(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline RMatrix matrix_from_json(const Json& j) {
  detail::require(j.is_array() && !j.empty(), "matrix_from_json: expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  RMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    detail::require(j[i].is_array() && static_cast<Eigen::Index>(j[i].size()) == cols, "matrix_from_json: ragged rows");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = number_from_json(j[i][k]);
  }
  return m;
}

// ---------------------------------------------------------------------------
// CostEstimate

inline Json to_json(const CostEstimate& e, long n = 0) {
  const CostExponents x = e.exponents();
  Json j{{"paradigm", to_string(e.paradigm)},
         {"strategy", to_string(e.strategy)},
         {"variant", e.variant},
         {"constant", json_number(e.constant)},
         {"exponents", {{"p", x.p}, {"n", x.n}, {"k", x.k}, {"N", x.N}}},
         {"status", to_string(e.status)},
         {"provenance", e.provenance},
         {"formula", e.formula},
         {"n_offset", json_number(e.n_offset)}};
  j["bracket"] = e.bracket_lo && e.bracket_hi ? Json::array({json_number(*e.bracket_lo), json_number(*e.bracket_hi)}) : Json();
  if (n > 0) j["effective_constant"] = json_number(e.effective_constant(n));
  return j;
}

inline CostEstimate cost_estimate_from_json(const Json& j) {
  CostEstimate e;
  e.paradigm = paradigm_from_string(j.at("paradigm").get<std::string>());
  e.strategy = strategy_from_string(j.at("strategy").get<std::string>());
  e.variant = j.value("variant", "");
  e.constant = number_from_json(j.at("constant"));
  e.p_exponent = j.at("exponents").at("p").get<int>();
  e.status = status_from_string(j.at("status").get<std::string>());
  e.provenance = j.value("provenance", "");
  e.formula = j.value("formula", "");
  e.n_offset = j.contains("n_offset") ? number_from_json(j.at("n_offset")) : 0.0;
  if (j.contains("bracket") && j.at("bracket").is_array()) {
    e.bracket_lo = number_from_json(j.at("bracket").at(0));
    e.bracket_hi = number_from_json(j.at("bracket").at(1));
  }
  return e;
}

inline Json to_json(const CatalogEntry& e, long n = 0) {
  Json j = to_json(e.estimate, n);
  j["source"] = to_string(e.source);
  return j;
}

inline Json to_json(const ModelRecord& r, long n = 0) {
  Json entries = Json::array();
  for (const auto& e : r.entries) entries.push_back(to_json(e, n));
  return {{"name", r.name}, {"p", r.p}, {"entries", entries}, {"notes", r.notes}};
}

// ---------------------------------------------------------------------------
// QFI, variational results

inline Json to_json(const QfiMatrix& f) { return matrix_to_json(f.matrix()); }

inline Json to_json(const SaturabilityReport& s) {
  return {{"p", s.p}, {"imag_parts", matrix_to_json(s.imag_parts)}, {"imag_max", json_number(s.imag_max)}, {"saturable", s.saturable}};
}

inline Json to_json(const SimplexSpectrum& s) {
  return {{"p", s.p},
          {"h", json_number(s.h)},
          {"E", json_number(s.E)},
          {"E_over_p3", json_number(s.E / (static_cast<double>(s.p) * s.p * s.p))},
          {"iterations", s.iterations},
          {"residual", json_number(s.residual)},
          {"relative_residual", json_number(s.residual / s.E)},
          {"nodes", s.nodes}};
}

inline Json to_json(const AiryBoundResult& a) {
  return {{"a_prime_zero", json_number(a.a_prime_zero)},
          {"I_norm", json_number(a.I_norm)},
          {"I_mean", json_number(a.I_mean)},
          {"I_kinetic", json_number(a.I_kinetic)},
          {"constant", json_number(a.constant)}};
}

// ---------------------------------------------------------------------------
// CSV

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row) {
    detail::require(row.size() == header_.size(), "CsvTable: row width differs from header");
    rows_.push_back(std::move(row));
  }

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  void write(std::ostream& os) const {
    write_line(os, header_);
    for (const auto& r : rows_) write_line(os, r);
  }

  std::string str() const {
    std::ostringstream os;
    write(os);
    return os.str();
  }

 private:
  static std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  }

  static void write_line(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) os << ',';
      os << quote(fields[i]);
    }
    os << '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace metrocost

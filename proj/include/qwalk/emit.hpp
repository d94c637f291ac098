#pragma once

#include <json.hpp>

#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qwalk {

enum class Format { json, csv, table };

inline Format format_from_string(std::string_view s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  if (s == "table") return Format::table;
  throw std::invalid_argument("unknown format '" + std::string(s) + "'");
}

namespace detail {

inline bool is_state_doc(const nlohmann::json& j) {
  return j.is_object() && (j.contains("amps") || j.contains("mat"));
}

inline std::string scalar_text(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "";
  if (j.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
    return buf;
  }
  return j.dump();
}

/// Scalars keep their dotted path; arrays of scalars are joined with ';';
/// states and arrays of objects are skipped.
inline void flatten(const nlohmann::json& j, const std::string& prefix, std::map<std::string, std::string>& out) {
  if (is_state_doc(j)) return;
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    return;
  }
  if (j.is_array()) {
    std::string joined;
    for (const auto& e : j) {
      if (e.is_structured()) return;
      if (!joined.empty()) joined += ';';
      joined += scalar_text(e);
    }
    out[prefix] = joined;
    return;
  }
  out[prefix] = scalar_text(j);
}

inline std::vector<std::map<std::string, std::string>> rows_of(const nlohmann::json& doc) {
  std::vector<std::map<std::string, std::string>> rows;
  auto add = [&](const nlohmann::json& j) {
    std::map<std::string, std::string> row;
    flatten(j, j.is_object() ? "" : "value", row);
    rows.push_back(std::move(row));
  };
  if (doc.is_array()) {
    for (const auto& e : doc) add(e);
  } else {
    add(doc);
  }
  return rows;
}

inline std::vector<std::string> columns_of(const std::vector<std::map<std::string, std::string>>& rows) {
  std::set<std::string> cols;
  for (const auto& r : rows)
    for (const auto& [k, v] : r) cols.insert(k);
  return {cols.begin(), cols.end()};
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace detail

/// Compact JSON with sorted keys and round-trip precision.
inline std::string emit_json(const nlohmann::json& doc) { return doc.dump() + "\n"; }

inline std::string emit_csv(const nlohmann::json& doc) {
  const auto rows = detail::rows_of(doc);
  const auto cols = detail::columns_of(rows);
  std::ostringstream os;
  for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << detail::csv_field(cols[c]);
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto it = r.find(cols[c]);
      os << (c ? "," : "") << detail::csv_field(it == r.end() ? "" : it->second);
    }
    os << "\n";
  }
  return os.str();
}

inline std::string emit_table(const nlohmann::json& doc) {
  auto rows = detail::rows_of(doc);
  const auto cols = detail::columns_of(rows);
  // shorten long floats for reading; csv and json keep full precision
  for (auto& r : rows)
    for (auto& [k, v] : r) {
      char* end = nullptr;
      const double x = std::strtod(v.c_str(), &end);
      if (!v.empty() && end && *end == '\0' && v.find_first_of(".eE") != std::string::npos) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", x);
        v = buf;
      }
    }
  std::vector<std::size_t> width(cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    width[c] = cols[c].size();
    for (const auto& r : rows) {
      const auto it = r.find(cols[c]);
      if (it != r.end()) width[c] = std::max(width[c], it->second.size());
    }
  }
  std::ostringstream os;
  auto line = [&](auto cell) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const std::string s = cell(c);
      os << (c ? "  " : "") << s << std::string(width[c] - s.size(), ' ');
    }
    os << "\n";
  };
  line([&](std::size_t c) { return cols[c]; });
  line([&](std::size_t c) { return std::string(width[c], '-'); });
  for (const auto& r : rows)
    line([&](std::size_t c) {
      const auto it = r.find(cols[c]);
      return it == r.end() ? std::string() : it->second;
    });
  return os.str();
}

inline std::string emit(const nlohmann::json& doc, Format f) {
  switch (f) {
    case Format::json: return emit_json(doc);
    case Format::csv: return emit_csv(doc);
    case Format::table: return emit_table(doc);
  }
  return {};
}

}  // namespace qwalk

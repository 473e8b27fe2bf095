#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "covest/errors.hpp"

namespace covest {

using Json = nlohmann::ordered_json;

namespace detail {

// Floats render with 12 significant digits. Reparsing such a string and
// rendering again reproduces it byte for byte, which makes emitted reports
// golden-file comparable.
inline std::string format_double(double value) {
  if (!std::isfinite(value)) throw ValidationError("non-finite value in report");
  if (value == 0.0) value = 0.0;  // collapse -0
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

inline void append_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buffer[8];
          std::snprintf(buffer, sizeof(buffer), "\\u%04x", c);
          out += buffer;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

inline void write_json(std::string& out, const Json& value, int indent) {
  const std::string pad(2 * indent, ' ');
  const std::string pad_in(2 * (indent + 1), ' ');
  switch (value.type()) {
    case Json::value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, item] : value.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        append_escaped(out, key);
        out += ": ";
        write_json(out, item, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (value.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& item : value) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        write_json(out, item, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::string:
      append_escaped(out, value.get_ref<const std::string&>());
      return;
    case Json::value_t::boolean:
      out += value.get<bool>() ? "true" : "false";
      return;
    case Json::value_t::number_integer:
      out += std::to_string(value.get<std::int64_t>());
      return;
    case Json::value_t::number_unsigned:
      out += std::to_string(value.get<std::uint64_t>());
      return;
    case Json::value_t::number_float:
      out += format_double(value.get<double>());
      return;
    case Json::value_t::null:
      out += "null";
      return;
    default:
      throw ValidationError("unsupported JSON value in report");
  }
}

}  // namespace detail

inline std::string to_json_text(const Json& doc) {
  std::string out;
  detail::write_json(out, doc, 0);
  out += '\n';
  return out;
}

// One line of the invariant-check ledger.
struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct Report {
  Json doc;
  bool checks_pass = true;       // every ledger entry within tolerance
  bool certificate_pass = true;  // true when no certificate was requested
  bool pass = true;              // checks_pass && certificate_pass
};

inline std::string emit_json(const Report& report) { return to_json_text(report.doc); }

inline std::string emit_csv(const Report& report) {
  std::string out;
  if (report.doc.contains("estimation")) {
    const Json& est = report.doc["estimation"];
    out += "g,cost,p_correct\n";
    const Json& per_g = est["per_g_cost"];
    const Json& cond = est["conditional_probabilities"];
    for (std::size_t g = 0; g < per_g.size(); ++g) {
      out += std::to_string(g) + "," + detail::format_double(per_g[g].get<double>()) + "," +
             detail::format_double(cond[g][g].get<double>()) + "\n";
    }
    return out;
  }
  out += "irrep,dim,multiplicity\n";
  for (const Json& c : report.doc["decomposition"]["components"]) {
    out += std::to_string(c["irrep"].get<int>()) + "," + std::to_string(c["dim"].get<int>()) +
           "," + std::to_string(c["multiplicity"].get<int>()) + "\n";
  }
  return out;
}

inline std::string emit_text(const Report& report) {
  std::string out;
  out += "scenario: " + report.doc["name"].get<std::string>() + "\n";
  out += "command:  " + report.doc["command"].get<std::string>() + "\n";
  if (report.doc.contains("decomposition")) {
    out += "components (irrep, dim, multiplicity):\n";
    for (const Json& c : report.doc["decomposition"]["components"]) {
      out += "  (" + std::to_string(c["irrep"].get<int>()) + ", " +
             std::to_string(c["dim"].get<int>()) + ", " +
             std::to_string(c["multiplicity"].get<int>()) + ")\n";
    }
  }
  if (report.doc.contains("estimation")) {
    const Json& est = report.doc["estimation"];
    out += "c_ave = " + detail::format_double(est["c_ave"].get<double>()) + "\n";
    out += "c_wc  = " + detail::format_double(est["c_wc"].get<double>()) + "\n";
    out += "success probability = " +
           detail::format_double(est["success_probability"].get<double>()) + "\n";
  }
  if (report.doc.contains("theorem")) {
    out += "closed-form cost = " +
           detail::format_double(report.doc["theorem"]["value"].get<double>()) + "\n";
  }
  if (report.doc.contains("optimizer")) {
    const Json& opt = report.doc["optimizer"];
    out += "optimal weights =";
    for (const Json& w : opt["weights"]) {
      out += " " + detail::format_double(w.get<double>());
    }
    out += "\noptimal cost = " + detail::format_double(opt["cost"].get<double>()) + "\n";
  }
  if (report.doc.contains("certificate")) {
    const Json& cert = report.doc["certificate"];
    out += std::string("certificate: ") + (cert["pass"].get<bool>() ? "PASS" : "FAIL") +
           " (hermiticity defect " +
           detail::format_double(cert["hermiticity_defect"].get<double>()) + ", min slack " +
           detail::format_double(cert["min_slack"].get<double>()) + ")\n";
  }
  out += "invariant checks:\n";
  for (const Json& check : report.doc["checks"]) {
    out += std::string("  [") + (check["pass"].get<bool>() ? "PASS" : "FAIL") + "] " +
           check["name"].get<std::string>() + " residual=" +
           detail::format_double(check["residual"].get<double>()) + " tol=" +
           detail::format_double(check["tolerance"].get<double>()) + "\n";
  }
  out += std::string("overall: ") + (report.pass ? "PASS" : "FAIL") + "\n";
  return out;
}

inline std::string emit(const Report& report, const std::string& format) {
  if (format == "json") return emit_json(report);
  if (format == "csv") return emit_csv(report);
  if (format == "text") return emit_text(report);
  throw ValidationError("unknown report format: " + format);
}

}  // namespace covest

#pragma once

// Point-set CSV files, tabular CSV output and JSON views of verdicts.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "span_shrink/cluster1d.hpp"
#include "span_shrink/verdict.hpp"

namespace span_shrink {

/// Unreadable or malformed input, unwritable output.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits, enough to round-trip any double.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {
inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}
}  // namespace detail

/// One coordinate per line, first field of each line; a non-numeric first
/// line is taken as a header. Blank lines are ignored.
inline std::vector<double> read_points_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<double> points;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view field = detail::trim(line);
    if (line_no == 1 && field.size() >= 3 &&
        static_cast<unsigned char>(field[0]) == 0xEF) {
      field.remove_prefix(3);  // UTF-8 byte order mark
    }
    if (field.empty()) continue;
    field = detail::trim(field.substr(0, field.find(',')));
    double value = 0.0;
    if (!detail::parse_double(field, value)) {
      if (!seen_content) {
        seen_content = true;  // header
        continue;
      }
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": not a number: '" + std::string(field) + "'");
    }
    if (!std::isfinite(value)) {
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": non-finite value");
    }
    seen_content = true;
    points.push_back(value);
  }
  return points;
}

inline void write_points_csv(const std::filesystem::path& path,
                             std::span<const double> points) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "x\n";
  for (double v : points) out << format_number(v) << '\n';
}

/// Header line plus rows; every row must have the header's width.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  CsvTable& row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) {
      throw std::logic_error("CsvTable: row width differs from header");
    }
    rows_.push_back(std::move(cells));
    return *this;
  }

  std::string str() const {
    std::string text;
    append_line(text, header_);
    for (const auto& r : rows_) append_line(text, r);
    return text;
  }

  void write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << str();
  }

  std::size_t rows() const { return rows_.size(); }

 private:
  static void append_line(std::string& text, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text += ',';
      text += cells[i];
    }
    text += '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

inline nlohmann::json number_json(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

inline nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j;
  j["label"] = std::string(to_string(v.label));
  j["confidence"] = number_json(v.confidence);
  j["method"] = std::string(to_string(v.method));
  nlohmann::json d = nlohmann::json::object();
  const auto& diag = v.diagnostics;
  if (diag.distance_uniform) d["distance_uniform"] = number_json(*diag.distance_uniform);
  if (diag.distance_gaussian) d["distance_gaussian"] = number_json(*diag.distance_gaussian);
  if (diag.loglik_uniform) d["loglik_uniform"] = number_json(*diag.loglik_uniform);
  if (diag.loglik_gaussian) d["loglik_gaussian"] = number_json(*diag.loglik_gaussian);
  if (!diag.empirical_ratios.empty()) d["shrinkage_ratios"] = diag.empirical_ratios;
  if (!diag.diameters.empty()) d["diameters"] = diag.diameters;
  if (diag.delegate) d["delegate"] = std::string(to_string(*diag.delegate));
  if (v.method == Method::Hybrid) d["fallback"] = diag.fallback;
  if (!diag.warnings.empty()) d["warnings"] = diag.warnings;
  j["diagnostics"] = std::move(d);
  return j;
}

inline nlohmann::json to_json(const ClusterVerdict& r) {
  nlohmann::json j;
  j["cluster_id"] = r.cluster_id;
  j["size"] = r.size;
  j["label"] = std::string(to_string(r.verdict.label));
  j["confidence"] = number_json(r.verdict.confidence);
  j["method"] = std::string(to_string(r.verdict.method));
  if (r.verdict.diagnostics.delegate) {
    j["delegate"] = std::string(to_string(*r.verdict.diagnostics.delegate));
  }
  if (r.ground_truth) j["ground_truth"] = *r.ground_truth;
  return j;
}

inline nlohmann::json to_json(const Confusion& c) {
  return {{"true_positive", c.true_positive},
          {"false_negative", c.false_negative},
          {"true_negative", c.true_negative},
          {"false_positive", c.false_positive}};
}

}  // namespace span_shrink

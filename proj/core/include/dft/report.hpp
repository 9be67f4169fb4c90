#pragma once

/// @file report.hpp
/// Machine-readable analysis results (JSON and CSV).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dft {

inline constexpr const char* kToolVersion = "1.0.0";

struct ReportRow {
  double t = 0.0;
  std::optional<double> analytic;
  std::optional<double> quad_error;
  std::optional<double> mc;
  std::optional<double> mc_half_width;
  /// "exact", "paper" or "mc".
  std::string mode;
  std::optional<std::size_t> terms;
};

struct AnalysisReport {
  std::vector<ReportRow> rows;
  std::string model_digest;
  std::uint64_t seed = 0;
  std::string version = kToolVersion;
};

enum class ReportFormat { kJson, kCsv };

/// JSON keys come out in a fixed order, absent values as null. CSV has the
/// header `t,analytic,quad_err,mc,mc_halfwidth,mode,terms` and leaves absent
/// cells empty. Numbers use the shortest form that reads back exactly.
std::string emit_report(const AnalysisReport& report, ReportFormat format);

/// Inverse of the JSON form. Throws dft::Error on malformed input.
AnalysisReport parse_report_json(const std::string& text);

}  // namespace dft

#include "dft/report.hpp"

#include <sstream>

#include <json.hpp>

#include "dft/error.hpp"
#include "dft/syntax.hpp"

namespace dft {

namespace {

using ordered_json = nlohmann::ordered_json;

template <typename T>
ordered_json or_null(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

template <typename T>
std::optional<T> from_nullable(const ordered_json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

std::string cell(double v) { return format_number(v); }

std::string cell(const std::optional<double>& v) {
  return v ? cell(*v) : std::string();
}

std::string to_json(const AnalysisReport& r) {
  ordered_json j;
  j["version"] = r.version;
  j["modelDigest"] = r.model_digest;
  j["seed"] = r.seed;
  ordered_json points = ordered_json::array();
  for (const ReportRow& row : r.rows) {
    ordered_json p;
    p["t"] = row.t;
    p["analyticValue"] = or_null(row.analytic);
    p["quadError"] = or_null(row.quad_error);
    p["mcEstimate"] = or_null(row.mc);
    p["mcHalfWidth"] = or_null(row.mc_half_width);
    p["mode"] = row.mode;
    p["termCount"] = or_null(row.terms);
    points.push_back(std::move(p));
  }
  j["points"] = std::move(points);
  return j.dump(2) + "\n";
}

std::string to_csv(const AnalysisReport& r) {
  std::ostringstream out;
  out << "t,analytic,quad_err,mc,mc_halfwidth,mode,terms\n";
  for (const ReportRow& row : r.rows) {
    out << cell(row.t) << ',' << cell(row.analytic) << ','
        << cell(row.quad_error) << ',' << cell(row.mc) << ','
        << cell(row.mc_half_width) << ',' << row.mode << ',';
    if (row.terms) out << *row.terms;
    out << '\n';
  }
  return out.str();
}

}  // namespace

std::string emit_report(const AnalysisReport& report, ReportFormat format) {
  return format == ReportFormat::kJson ? to_json(report) : to_csv(report);
}

AnalysisReport parse_report_json(const std::string& text) {
  try {
    const ordered_json j = ordered_json::parse(text);
    AnalysisReport r;
    r.version = j.at("version").get<std::string>();
    r.model_digest = j.at("modelDigest").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const ordered_json& p : j.at("points")) {
      ReportRow row;
      row.t = p.at("t").get<double>();
      row.analytic = from_nullable<double>(p.at("analyticValue"));
      row.quad_error = from_nullable<double>(p.at("quadError"));
      row.mc = from_nullable<double>(p.at("mcEstimate"));
      row.mc_half_width = from_nullable<double>(p.at("mcHalfWidth"));
      row.mode = p.at("mode").get<std::string>();
      row.terms = from_nullable<std::size_t>(p.at("termCount"));
      r.rows.push_back(std::move(row));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
}

}  // namespace dft

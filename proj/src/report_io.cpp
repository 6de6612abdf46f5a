#include "repsep/report_io.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "repsep/format.hpp"

namespace repsep {
using json = nlohmann::json;

namespace {

std::string json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  return format_number(v);
}

double number_from_json(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw Error("report JSON: unexpected string value '" + s + "'");
  }
  return v.get<double>();
}

}  // namespace

std::string json_quote(std::string_view s) { return json(std::string(s)).dump(); }

std::string report_to_json(const SeparabilityReport& report) {
  std::ostringstream out;
  out << "{\n  \"metric\": " << json_quote(metric_name(report.metric)) << ",\n  \"families\": [";
  for (std::size_t i = 0; i < report.families.size(); ++i) out << (i ? ", " : "") << json_quote(report.families[i]);
  out << "],\n  \"pairs\": [";
  for (std::size_t i = 0; i < report.pairs.size(); ++i) {
    const auto& p = report.pairs[i];
    out << (i ? "," : "") << "\n    {\"a\": " << json_quote(p.a) << ", \"b\": " << json_quote(p.b)
        << ", \"dprime\": " << json_number(p.dprime) << ", \"silhouette\": " << json_number(p.silhouette)
        << ", \"auc\": " << json_number(p.auc) << ", \"flags\": [";
    for (std::size_t f = 0; f < p.flags.size(); ++f) out << (f ? ", " : "") << json_quote(p.flags[f]);
    out << "]}";
  }
  out << "\n  ],\n  \"global_auc\": " << json_number(report.global_auc) << ",\n  \"roc\": [";
  for (std::size_t i = 0; i < report.roc.size(); ++i)
    out << (i ? ", " : "") << '[' << json_number(report.roc[i].fpr) << ", " << json_number(report.roc[i].tpr) << ']';
  const auto& s = report.summary;
  out << "],\n  \"summary\": {\"dprime_mean\": " << json_number(s.dprime_mean)
      << ", \"dprime_pooled\": " << json_number(s.dprime_pooled)
      << ", \"silhouette_mean\": " << json_number(s.silhouette_mean) << ", \"auc_mean\": " << json_number(s.auc_mean)
      << ", \"infinite_dprime_count\": " << s.infinite_dprime_count << "}\n}\n";
  return out.str();
}

SeparabilityReport report_from_json(std::string_view text) {
  SeparabilityReport report;
  try {
    const auto doc = json::parse(text);
    const auto metric = parse_metric(doc.at("metric").get<std::string>());
    if (!metric) throw Error("report JSON: unknown metric");
    report.metric = *metric;
    report.families = doc.at("families").get<std::vector<std::string>>();
    for (const auto& p : doc.at("pairs")) {
      FamilyPairStats stats;
      stats.a = p.at("a").get<std::string>();
      stats.b = p.at("b").get<std::string>();
      stats.dprime = number_from_json(p.at("dprime"));
      stats.silhouette = number_from_json(p.at("silhouette"));
      stats.auc = number_from_json(p.at("auc"));
      stats.flags = p.at("flags").get<std::vector<std::string>>();
      report.pairs.push_back(std::move(stats));
    }
    report.global_auc = number_from_json(doc.at("global_auc"));
    for (const auto& pt : doc.at("roc")) report.roc.push_back({number_from_json(pt.at(0)), number_from_json(pt.at(1))});
    const auto& s = doc.at("summary");
    report.summary.dprime_mean = number_from_json(s.at("dprime_mean"));
    report.summary.dprime_pooled = number_from_json(s.at("dprime_pooled"));
    report.summary.silhouette_mean = number_from_json(s.at("silhouette_mean"));
    report.summary.auc_mean = number_from_json(s.at("auc_mean"));
    report.summary.infinite_dprime_count = s.at("infinite_dprime_count").get<std::size_t>();
  } catch (const json::exception& e) {
    throw Error(std::string("report JSON: ") + e.what());
  }
  return report;
}

std::string report_to_csv(const SeparabilityReport& report) {
  std::ostringstream out;
  out << "metric,family_a,family_b,dprime,silhouette,auc,flags\n";
  for (const auto& p : report.pairs) {
    out << metric_name(report.metric) << ',' << p.a << ',' << p.b << ',' << format_number(p.dprime) << ','
        << format_number(p.silhouette) << ',' << format_number(p.auc) << ',';
    for (std::size_t f = 0; f < p.flags.size(); ++f) out << (f ? ";" : "") << p.flags[f];
    out << '\n';
  }
  return out.str();
}

}  // namespace repsep

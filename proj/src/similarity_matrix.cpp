#include "repsep/similarity_matrix.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "repsep/format.hpp"

namespace repsep {
using json = nlohmann::json;

std::string_view metric_name(Metric metric) {
  switch (metric) {
    case Metric::rsa: return "rsa";
    case Metric::softmatch: return "softmatch";
    case Metric::procrustes: return "procrustes";
    case Metric::linear_predictivity: return "linpred";
  }
  return "unknown";
}

std::string_view metric_label(Metric metric) {
  switch (metric) {
    case Metric::rsa: return "RSA";
    case Metric::softmatch: return "Soft Matching";
    case Metric::procrustes: return "Procrustes";
    case Metric::linear_predictivity: return "Linear Predictivity";
  }
  return "unknown";
}

std::optional<Metric> parse_metric(std::string_view name) {
  for (auto m : kAllMetrics)
    if (metric_name(m) == name) return m;
  if (name == "linear_predictivity") return Metric::linear_predictivity;
  return std::nullopt;
}

std::string similarity_to_json(const SimilarityMatrix& sim) {
  const auto quote = [](const std::string& v) { return json(v).dump(); };
  std::ostringstream out;
  out << "{\n  \"metric\": " << quote(std::string(metric_name(sim.metric))) << ",\n  \"model_ids\": [";
  for (std::size_t i = 0; i < sim.model_ids.size(); ++i) out << (i ? ", " : "") << quote(sim.model_ids[i]);
  out << "],\n  \"scores\": [";
  for (Eigen::Index i = 0; i < sim.scores.rows(); ++i) {
    out << (i ? "," : "") << "\n    [";
    for (Eigen::Index j = 0; j < sim.scores.cols(); ++j) out << (j ? ", " : "") << format_number(sim.scores(i, j));
    out << ']';
  }
  out << "\n  ],\n  \"symmetrized\": " << (sim.symmetrized ? "true" : "false") << "\n}\n";
  return out.str();
}

SimilarityMatrix similarity_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("similarity JSON: ") + e.what());
  }
  SimilarityMatrix sim;
  try {
    const auto metric = parse_metric(doc.at("metric").get<std::string>());
    if (!metric) throw Error("similarity JSON: unknown metric " + doc.at("metric").dump());
    sim.metric = *metric;
    sim.model_ids = doc.at("model_ids").get<std::vector<std::string>>();
    sim.symmetrized = doc.at("symmetrized").get<bool>();
    const auto& rows = doc.at("scores");
    const auto k = static_cast<Eigen::Index>(sim.model_ids.size());
    if (static_cast<Eigen::Index>(rows.size()) != k) throw Error("similarity JSON: scores row count != model count");
    sim.scores.resize(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      const auto& row = rows.at(static_cast<std::size_t>(i));
      if (static_cast<Eigen::Index>(row.size()) != k) throw Error("similarity JSON: ragged scores row " + std::to_string(i));
      for (Eigen::Index j = 0; j < k; ++j) sim.scores(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
    }
  } catch (const json::exception& e) {
    throw Error(std::string("similarity JSON: ") + e.what());
  }
  return sim;
}

std::string similarity_to_csv(const SimilarityMatrix& sim) {
  std::ostringstream out;
  out << "model_id";
  for (const auto& id : sim.model_ids) out << ',' << id;
  out << '\n';
  for (Eigen::Index i = 0; i < sim.scores.rows(); ++i) {
    out << sim.model_ids[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < sim.scores.cols(); ++j) out << ',' << format_number(sim.scores(i, j));
    out << '\n';
  }
  return out.str();
}

SimilarityMatrix read_similarity_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return similarity_from_json(buf.str());
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace repsep

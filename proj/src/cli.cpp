#include "repsep/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "repsep/log.hpp"
#include "repsep/report_io.hpp"
#include "repsep/svg.hpp"
#include "repsep/synthetic.hpp"

namespace repsep::cli {
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::vector<Metric> parse_metric_list(const std::vector<std::string>& names) {
  std::vector<Metric> metrics;
  for (const auto& name : names) {
    const auto m = parse_metric(name);
    if (!m) throw Error("unknown metric '" + name + "' (expected rsa, softmatch, procrustes, linpred)");
    if (std::find(metrics.begin(), metrics.end(), *m) == metrics.end()) metrics.push_back(*m);
  }
  if (metrics.empty()) throw Error("metric set is empty");
  return metrics;
}

RdmDissimilarity parse_rdm(const std::string& s) {
  if (s == "euclidean") return RdmDissimilarity::euclidean;
  if (s == "correlation_distance") return RdmDissimilarity::correlation_distance;
  throw Error("unknown rdm dissimilarity '" + s + "'");
}

ScoreAggregation parse_aggregation(const std::string& s) {
  if (s == "matrix_pearson") return ScoreAggregation::matrix_pearson;
  if (s == "mean_per_unit_pearson") return ScoreAggregation::mean_per_unit_pearson;
  throw Error("unknown score aggregation '" + s + "'");
}

// Files are staged in memory and written together; a failed write removes
// everything written by this batch.
class OutputBatch {
 public:
  explicit OutputBatch(fs::path dir) : dir_(std::move(dir)) {}

  void add(const std::string& name, std::string content) { files_.emplace_back(dir_ / name, std::move(content)); }

  void commit() {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error("cannot create output directory " + dir_.string() + ": " + ec.message());
    std::vector<fs::path> written;
    for (const auto& [path, content] : files_) {
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (out) out.write(content.data(), static_cast<std::streamsize>(content.size()));
      if (!out) {
        for (const auto& p : written) fs::remove(p, ec);
        fs::remove(path, ec);
        throw Error("cannot write " + path.string());
      }
      written.push_back(path);
      log::debug("wrote " + path.string());
    }
  }

  const std::vector<std::pair<fs::path, std::string>>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::pair<fs::path, std::string>> files_;
};

std::string padded(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

}  // namespace

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error("config " + path.string() + ": " + e.what());
  }
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  const auto resolve = [&](const std::string& p) {
    const fs::path q(p);
    return q.is_relative() ? (base / q).lexically_normal() : q;
  };
  RunConfig cfg;
  try {
    if (!doc.contains("manifest")) throw Error("config " + path.string() + ": missing \"manifest\"");
    cfg.manifest = resolve(doc.at("manifest").get<std::string>());
    if (doc.contains("metrics")) cfg.metrics = parse_metric_list(doc.at("metrics").get<std::vector<std::string>>());
    if (doc.contains("rdm")) cfg.metric_config.rdm = parse_rdm(doc.at("rdm").get<std::string>());
    if (doc.contains("aggregation"))
      cfg.metric_config.aggregation = parse_aggregation(doc.at("aggregation").get<std::string>());
    cfg.output_dir = resolve(doc.value("out", std::string("results")));
    cfg.jobs = doc.value("jobs", 1u);
    cfg.seed = doc.value("seed", std::uint64_t{0});
    if (doc.contains("export")) {
      const auto& ex = doc.at("export");
      cfg.exports.json = ex.value("json", true);
      cfg.exports.csv = ex.value("csv", true);
      cfg.exports.svg = ex.value("svg", false);
    }
  } catch (const json::exception& e) {
    throw Error("config " + path.string() + ": " + e.what());
  }
  return cfg;
}

int cmd_validate(const fs::path& manifest, std::ostream& out, std::ostream& err) {
  std::vector<ModelRecord> records;
  try {
    records = load_manifest(manifest);
  } catch (const Error& e) {
    err << "validate: " << e.what() << '\n';
    return 1;
  }

  struct Row {
    const ModelRecord* rec;
    Eigen::Index m = -1, n = -1;
    std::string problem;
  };
  std::vector<Row> rows;
  std::map<Eigen::Index, std::size_t> m_counts;
  for (const auto& rec : records) {
    Row row{&rec, -1, -1, {}};
    try {
      const auto x = load_activation_matrix(rec.path, rec.model_id);
      row.m = x.stimuli();
      row.n = x.units();
      ++m_counts[row.m];
    } catch (const Error& e) {
      row.problem = e.what();
    }
    rows.push_back(std::move(row));
  }
  // Reference stimulus count: the most common one, earliest on ties.
  Eigen::Index reference = -1;
  std::size_t best = 0;
  for (const auto& row : rows)
    if (row.m >= 0 && m_counts[row.m] > best) {
      best = m_counts[row.m];
      reference = row.m;
    }

  std::size_t failures = 0;
  out << padded("model_id", 24) << padded("M", 8) << padded("N", 8) << padded("family", 16) << "status\n";
  for (auto& row : rows) {
    if (row.problem.empty() && row.m != reference)
      row.problem = "stimulus count " + std::to_string(row.m) + " differs from " + std::to_string(reference);
    const bool ok = row.problem.empty();
    failures += ok ? 0 : 1;
    out << padded(row.rec->model_id, 24) << padded(row.m >= 0 ? std::to_string(row.m) : "-", 8)
        << padded(row.n >= 0 ? std::to_string(row.n) : "-", 8) << padded(row.rec->family, 16)
        << (ok ? "ok" : "FAIL") << '\n';
    if (!ok) err << "validate: " << row.rec->model_id << ": " << row.problem << '\n';
  }
  if (records.empty()) {
    err << "validate: manifest lists no models\n";
    return 1;
  }
  return failures == 0 ? 0 : 1;
}

int cmd_similarity(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.metrics.empty()) throw Error("metric set is empty");
    const auto records = load_manifest(config.manifest);
    log::info("loading " + std::to_string(records.size()) + " models from " + config.manifest.string());
    const auto models = load_models(records);
    OutputBatch batch(config.output_dir);
    for (const auto metric : config.metrics) {
      log::info("computing " + std::string(metric_name(metric)) + " similarities");
      const auto sim = pairwise_similarity(std::span<const ActivationMatrix>(models), metric, config.metric_config,
                                           config.jobs);
      const std::string stem(metric_name(metric));
      batch.add(stem + ".json", similarity_to_json(sim));
      if (config.exports.csv) batch.add(stem + ".csv", similarity_to_csv(sim));
    }
    batch.commit();
    for (const auto& [path, content] : batch.files()) out << path.string() << '\n';
    return 0;
  } catch (const Error& e) {
    err << "similarity: " << e.what() << '\n';
    return 1;
  }
}

int cmd_separability(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.metrics.empty()) throw Error("metric set is empty");
    const auto records = load_manifest(config.manifest);
    OutputBatch batch(config.output_dir);
    std::vector<SeparabilityReport> reports;
    for (const auto metric : config.metrics) {
      const std::string stem(metric_name(metric));
      const auto sim = read_similarity_json(config.output_dir / (stem + ".json"));
      if (sim.metric != metric) throw Error(stem + ".json holds metric '" + std::string(metric_name(sim.metric)) + "'");
      auto report = build_report(sim, records);
      batch.add(stem + "_separability.json", report_to_json(report));
      if (config.exports.csv) batch.add(stem + "_separability.csv", report_to_csv(report));
      if (config.exports.svg) {
        batch.add(stem + "_dprime.svg", svg::heatmap(report, svg::HeatmapValue::dprime));
        batch.add(stem + "_silhouette.svg", svg::heatmap(report, svg::HeatmapValue::silhouette));
        batch.add(stem + "_roc.svg", svg::roc_curve(report));
      }
      reports.push_back(std::move(report));
    }
    if (config.exports.svg) batch.add("roc_overlay.svg", svg::roc_overlay(reports));
    batch.commit();

    out << padded("metric", 12) << padded("dprime_mean", 14) << padded("dprime_pooled", 15)
        << padded("silhouette", 12) << "global_auc\n";
    for (const auto& r : reports) {
      const auto num = [](double v) {
        std::ostringstream s;
        s << std::fixed << std::setprecision(4) << v;
        return s.str();
      };
      out << padded(std::string(metric_name(r.metric)), 12) << padded(num(r.summary.dprime_mean), 14)
          << padded(num(r.summary.dprime_pooled), 15) << padded(num(r.summary.silhouette_mean), 12)
          << num(r.global_auc) << '\n';
    }
    return 0;
  } catch (const Error& e) {
    err << "separability: " << e.what() << '\n';
    return 1;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Representational similarity metrics and model-family separability"};
  app.require_subcommand(1);

  std::string manifest_path;
  auto* validate = app.add_subcommand("validate", "Check a manifest and its activation files");
  validate->add_option("manifest", manifest_path, "Manifest JSON")->required();

  std::string config_path;
  std::vector<std::string> metric_names;
  std::string out_dir;
  unsigned jobs = 0;
  std::string rdm, aggregation;
  auto* similarity = app.add_subcommand("similarity", "Compute pairwise similarity matrices");
  similarity->add_option("--config", config_path, "Run config JSON")->required();
  similarity->add_option("--metrics", metric_names, "Metrics: rsa,softmatch,procrustes,linpred")->delimiter(',');
  similarity->add_option("--out", out_dir, "Output directory");
  similarity->add_option("--jobs", jobs, "Concurrent pair computations")->check(CLI::PositiveNumber);
  similarity->add_option("--rdm", rdm, "RDM dissimilarity: euclidean|correlation_distance");
  similarity->add_option("--aggregation", aggregation, "Score aggregation: matrix_pearson|mean_per_unit_pearson");

  bool svg_flag = false;
  auto* separability = app.add_subcommand("separability", "Family separability reports from similarity matrices");
  separability->add_option("--config", config_path, "Run config JSON")->required();
  separability->add_option("--metrics", metric_names, "Metrics to report")->delimiter(',');
  separability->add_option("--out", out_dir, "Directory holding similarity matrices; reports go here too");
  separability->add_flag("--svg", svg_flag, "Also write SVG heatmaps and ROC plots");

  SyntheticSpec synth_spec;
  std::string synth_dir;
  auto* synth = app.add_subcommand("synth", "Write a synthetic multi-family corpus and manifest");
  synth->add_option("--out", synth_dir, "Output directory")->required();
  synth->add_option("--families", synth_spec.families)->check(CLI::PositiveNumber);
  synth->add_option("--models", synth_spec.models_per_family, "Models per family")->check(CLI::PositiveNumber);
  synth->add_option("--stimuli", synth_spec.stimuli)->check(CLI::Range(2, 1000000));
  synth->add_option("--units", synth_spec.units)->check(CLI::PositiveNumber);
  synth->add_option("--noise", synth_spec.noise)->check(CLI::NonNegativeNumber);
  synth->add_option("--seed", synth_spec.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  const auto configure = [&]() {
    auto cfg = load_run_config(config_path);
    if (!metric_names.empty()) cfg.metrics = parse_metric_list(metric_names);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (jobs > 0) cfg.jobs = jobs;
    if (!rdm.empty()) cfg.metric_config.rdm = parse_rdm(rdm);
    if (!aggregation.empty()) cfg.metric_config.aggregation = parse_aggregation(aggregation);
    if (svg_flag) cfg.exports.svg = true;
    return cfg;
  };

  try {
    if (*validate) return cmd_validate(manifest_path, out, err);
    if (*similarity) return cmd_similarity(configure(), out, err);
    if (*separability) return cmd_separability(configure(), out, err);
    if (*synth) {
      const auto manifest = write_synthetic_corpus(make_synthetic_families(synth_spec), synth_dir);
      out << manifest.string() << '\n';
      return 0;
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace repsep::cli

#include "repsep/synthetic.hpp"

#include <fstream>
#include <random>

#include "repsep/report_io.hpp"

namespace repsep {
namespace fs = std::filesystem;

SyntheticCorpus make_synthetic_families(const SyntheticSpec& spec) {
  if (spec.families < 1 || spec.models_per_family < 1) throw Error("synthetic: need at least one family and model");
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto draw = [&](Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = gauss(rng);
    return m;
  };

  SyntheticCorpus corpus;
  for (int f = 0; f < spec.families; ++f) {
    const Matrix basis = draw(spec.stimuli, spec.units);
    for (int k = 0; k < spec.models_per_family; ++k) {
      const std::string id = "f" + std::to_string(f) + "_m" + std::to_string(k);
      Matrix data = basis + spec.noise * draw(spec.stimuli, spec.units);
      corpus.models.emplace_back(id, std::move(data));
      corpus.records.push_back({id, "family" + std::to_string(f), {}});
    }
  }
  return corpus;
}

fs::path write_synthetic_corpus(const SyntheticCorpus& corpus, const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream manifest(dir / "manifest.json", std::ios::trunc);
  if (!manifest) throw Error("cannot write " + (dir / "manifest.json").string());
  manifest << "{\n  \"models\": [";
  for (std::size_t i = 0; i < corpus.models.size(); ++i) {
    const auto file = corpus.records[i].model_id + ".npy";
    write_activation_npy(dir / file, corpus.models[i].data());
    manifest << (i ? "," : "") << "\n    {\"id\": " << json_quote(corpus.records[i].model_id)
             << ", \"family\": " << json_quote(corpus.records[i].family) << ", \"path\": " << json_quote(file) << "}";
  }
  manifest << "\n  ]\n}\n";
  return dir / "manifest.json";
}

}  // namespace repsep

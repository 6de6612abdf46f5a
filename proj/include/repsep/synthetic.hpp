#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "repsep/data_model.hpp"

namespace repsep {

/// Synthetic model families: every model is its family's shared random
/// M x N basis plus independent Gaussian noise scaled by `noise`.
struct SyntheticSpec {
  int families = 4;
  int models_per_family = 5;
  Eigen::Index stimuli = 100;
  Eigen::Index units = 20;
  double noise = 0.1;
  std::uint64_t seed = 0;
};

struct SyntheticCorpus {
  std::vector<ActivationMatrix> models;
  /// Ids "f<family>_m<model>", families "family<k>"; paths empty until written.
  std::vector<ModelRecord> records;
};

SyntheticCorpus make_synthetic_families(const SyntheticSpec& spec);

/// Writes one NPY per model plus `manifest.json` (relative paths) into
/// `dir`; returns the manifest path.
std::filesystem::path write_synthetic_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& dir);

}  // namespace repsep

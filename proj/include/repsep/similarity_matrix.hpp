#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "repsep/data_model.hpp"

namespace repsep {

enum class Metric { rsa, softmatch, procrustes, linear_predictivity };

inline constexpr Metric kAllMetrics[] = {Metric::rsa, Metric::softmatch, Metric::procrustes,
                                         Metric::linear_predictivity};

/// Short names used on the command line and as output file stems:
/// rsa, softmatch, procrustes, linpred.
std::string_view metric_name(Metric metric);
std::string_view metric_label(Metric metric);
/// Accepts the short names plus "linear_predictivity".
std::optional<Metric> parse_metric(std::string_view name);

/// K x K scores over an ordered model list. Entries lie in [-1, 1], the
/// diagonal is 1, and when `symmetrized` is set scores(i, j) == scores(j, i).
struct SimilarityMatrix {
  Metric metric = Metric::rsa;
  std::vector<std::string> model_ids;
  Matrix scores;
  bool symmetrized = false;
};

/// `{"metric", "model_ids", "scores": [[...], ...], "symmetrized"}`.
std::string similarity_to_json(const SimilarityMatrix& sim);
SimilarityMatrix similarity_from_json(std::string_view text);

/// Header row and first column carry the model ids.
std::string similarity_to_csv(const SimilarityMatrix& sim);

SimilarityMatrix read_similarity_json(const std::filesystem::path& path);

}  // namespace repsep

#pragma once

#include <span>
#include <string>
#include <vector>

#include "repsep/data_model.hpp"
#include "repsep/similarity_matrix.hpp"

namespace repsep {

/// Similarity samples for one family pair: within_a/within_b hold every
/// distinct intra-family pair, between every cross pair. No diagonal.
struct PairSample {
  std::vector<double> within_a;
  std::vector<double> within_b;
  std::vector<double> between;
};

/// Collects the samples of a family pair from model indices into `sim`.
PairSample pair_sample(const SimilarityMatrix& sim, std::span<const std::size_t> family_a,
                       std::span<const std::size_t> family_b);

/// (mean_w - mean_b) / sqrt(0.5 (var_w + var_b)) with population variances.
/// A pooled deviation below 1e-15 yields 0 when the means agree within
/// 1e-15 and an infinity carrying the numerator's sign otherwise.
double dprime_directional(std::span<const double> within, std::span<const double> between);

struct DPrimePair {
  double value = 0.0;
  /// Only one family had an intra-family pair; value is that direction.
  bool single_direction = false;
};

/// Average of the two directional d' values (within_a vs between and
/// within_b vs between).
DPrimePair dprime_pair(const PairSample& sample);

/// Two-family silhouette on distances 1 - similarity, averaged over both
/// families' mean s(i). Both families need at least two members.
double silhouette_pair(const SimilarityMatrix& sim, std::span<const std::size_t> family_a,
                       std::span<const std::size_t> family_b);
double silhouette_pair(const SimilarityMatrix& sim, const std::vector<std::string>& family_a,
                       const std::vector<std::string>& family_b);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

struct RocCurve {
  double auc = 0.5;
  std::vector<RocPoint> points;
};

/// Mann-Whitney AUC with average ranks for ties; ROC points at every
/// distinct score, highest threshold first, from (0,0) to (1,1).
RocCurve roc_auc(std::span<const double> positives, std::span<const double> negatives);

struct FamilyPairStats {
  std::string a;
  std::string b;
  double dprime = 0.0;
  double silhouette = 0.0;
  double auc = 0.5;
  std::vector<std::string> flags;
  friend bool operator==(const FamilyPairStats&, const FamilyPairStats&) = default;
};

struct SeparabilitySummary {
  /// Mean over family-pair cells, infinite cells excluded.
  double dprime_mean = 0.0;
  /// One d' over all within-family vs all between-family pairs.
  double dprime_pooled = 0.0;
  double silhouette_mean = 0.0;
  double auc_mean = 0.0;
  std::size_t infinite_dprime_count = 0;
  friend bool operator==(const SeparabilitySummary&, const SeparabilitySummary&) = default;
};

struct SeparabilityReport {
  Metric metric = Metric::rsa;
  std::vector<std::string> families;
  /// One entry per unordered family pair, ordered as in `families`.
  std::vector<FamilyPairStats> pairs;
  double global_auc = 0.5;
  std::vector<RocPoint> roc;
  SeparabilitySummary summary;

  /// Lookup in either order.
  const FamilyPairStats& pair(const std::string& a, const std::string& b) const;
  friend bool operator==(const SeparabilityReport&, const SeparabilityReport&) = default;
};

/// Families are ordered by first appearance in `sim.model_ids`. Requires at
/// least two families and at least two members in every family.
SeparabilityReport build_report(const SimilarityMatrix& sim, const std::vector<ModelRecord>& records);

}  // namespace repsep

#pragma once

#include <span>
#include <string>
#include <vector>

#include "repsep/data_model.hpp"
#include "repsep/similarity_matrix.hpp"
#include "repsep/transport.hpp"

namespace repsep {

/// Stimulus-by-stimulus dissimilarities for one model: symmetric,
/// nonnegative, zero diagonal.
struct RDM {
  std::string model_id;
  Matrix matrix;
};

enum class RdmDissimilarity { euclidean, correlation_distance };

// How a target/prediction matrix pair is reduced to one correlation.
//   matrix_pearson         Pearson over all entries of the (column-centered)
//                          matrices, i.e. the cosine of the Frobenius angle.
//   mean_per_unit_pearson  Pearson per target unit, averaged over units.
enum class ScoreAggregation { matrix_pearson, mean_per_unit_pearson };

struct MetricConfig {
  RdmDissimilarity rdm = RdmDissimilarity::euclidean;
  ScoreAggregation aggregation = ScoreAggregation::matrix_pearson;
};

RDM compute_rdm(const ActivationMatrix& x, const MetricConfig& config = {});

/// Spearman correlation of the strictly-lower triangles of two RDMs.
double rsa_score(const RDM& a, const RDM& b);
double rsa_score(const ActivationMatrix& x_i, const ActivationMatrix& x_j, const MetricConfig& config = {});

struct SoftMatchAlignment {
  double score = 0.0;
  TransportPlan transport;
  /// Ni x Nj barycentric operator: column v is plan(:, v) / sum(plan(:, v)).
  Matrix alignment;
};

/// Unit-to-unit optimal transport on squared column distances; the source
/// is mapped through the barycentric projection of the plan.
SoftMatchAlignment softmatch_align(const ActivationMatrix& x_i, const ActivationMatrix& x_j,
                                   const MetricConfig& config = {});
double softmatch_score(const ActivationMatrix& x_i, const ActivationMatrix& x_j, const MetricConfig& config = {});

/// Pads the narrower side with zero units, aligns x_i onto x_j by an
/// orthogonal map and scores only the target's real (unpadded) units.
double procrustes_score(const ActivationMatrix& x_i, const ActivationMatrix& x_j, const MetricConfig& config = {});

/// OLS map from x_i to x_j, scored on the fitting data.
double linear_predictivity_score(const ActivationMatrix& x_i, const ActivationMatrix& x_j,
                                 const MetricConfig& config = {});

/// score(i -> j): x_i is the source, x_j the target.
double similarity_score(Metric metric, const ActivationMatrix& x_i, const ActivationMatrix& x_j,
                        const MetricConfig& config = {});

/// Correlation between a target and its prediction under `aggregation`.
/// Only the first `units` columns are scored (all when negative).
double alignment_correlation(const Matrix& target, const Matrix& prediction, ScoreAggregation aggregation,
                             Eigen::Index units = -1);

/// All-pairs scores over models sharing one stimulus set. Inputs are
/// centered if they are not already. Directional metrics are evaluated in
/// both directions and averaged, so the result is always symmetrized.
SimilarityMatrix pairwise_similarity(std::span<const ActivationMatrix> models, Metric metric,
                                     const MetricConfig& config = {}, unsigned jobs = 1);

/// Loads and centers every record's activations, checking that all share
/// one stimulus count.
std::vector<ActivationMatrix> load_models(const std::vector<ModelRecord>& records);

SimilarityMatrix pairwise_similarity(const std::vector<ModelRecord>& records, Metric metric,
                                     const MetricConfig& config = {}, unsigned jobs = 1);

}  // namespace repsep

#include "repsep/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "repsep/numerics.hpp"
#include "repsep/parallel.hpp"

namespace repsep {
namespace {

void require_centered(const ActivationMatrix& x, const char* who) {
  if (!x.centered()) throw Error(std::string(who) + ": '" + x.model_id() + "' must be column-centered");
}

void require_same_stimuli(const ActivationMatrix& a, const ActivationMatrix& b, const char* who) {
  if (a.stimuli() != b.stimuli())
    throw Error(std::string(who) + ": stimulus count mismatch ('" + a.model_id() + "' has " +
                std::to_string(a.stimuli()) + ", '" + b.model_id() + "' has " + std::to_string(b.stimuli()) + ")");
}

std::span<const double> as_span(const Matrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }

}  // namespace

RDM compute_rdm(const ActivationMatrix& x, const MetricConfig& config) {
  require_centered(x, "compute_rdm");
  if (x.stimuli() < 3) throw Error("compute_rdm: '" + x.model_id() + "' needs at least 3 stimuli");
  const Eigen::Index m = x.stimuli();
  // Rows as contiguous columns.
  const Matrix rows = x.data().transpose();
  Matrix d = Matrix::Zero(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < a; ++b) {
      double v;
      if (config.rdm == RdmDissimilarity::euclidean) {
        v = (rows.col(a) - rows.col(b)).norm();
      } else {
        const std::span<const double> ra(rows.col(a).data(), static_cast<std::size_t>(rows.rows()));
        const std::span<const double> rb(rows.col(b).data(), static_cast<std::size_t>(rows.rows()));
        v = std::max(0.0, 1.0 - pearson(ra, rb));
      }
      d(a, b) = v;
      d(b, a) = v;
    }
  }
  return {x.model_id(), std::move(d)};
}

double rsa_score(const RDM& a, const RDM& b) {
  if (a.matrix.rows() != b.matrix.rows())
    throw Error("rsa_score: stimulus count mismatch ('" + a.model_id + "' has " + std::to_string(a.matrix.rows()) +
                ", '" + b.model_id + "' has " + std::to_string(b.matrix.rows()) + ")");
  const Eigen::Index m = a.matrix.rows();
  std::vector<double> va, vb;
  va.reserve(static_cast<std::size_t>(m * (m - 1) / 2));
  vb.reserve(va.capacity());
  for (Eigen::Index r = 1; r < m; ++r)
    for (Eigen::Index c = 0; c < r; ++c) {
      va.push_back(a.matrix(r, c));
      vb.push_back(b.matrix(r, c));
    }
  return spearman(va, vb);
}

double rsa_score(const ActivationMatrix& x_i, const ActivationMatrix& x_j, const MetricConfig& config) {
  require_same_stimuli(x_i, x_j, "rsa_score");
  return rsa_score(compute_rdm(x_i, config), compute_rdm(x_j, config));
}

double alignment_correlation(const Matrix& target, const Matrix& prediction, ScoreAggregation aggregation,
                             Eigen::Index units) {
  if (target.rows() != prediction.rows() || target.cols() != prediction.cols())
    throw Error("alignment_correlation: shape mismatch");
  if (units < 0) units = target.cols();
  if (units == 0) return 0.0;
  if (aggregation == ScoreAggregation::matrix_pearson) {
    const Matrix t = target.leftCols(units);
    const Matrix p = prediction.leftCols(units);
    return pearson(as_span(t), as_span(p));
  }
  double sum = 0;
  for (Eigen::Index v = 0; v < units; ++v) {
    const std::span<const double> t(target.col(v).data(), static_cast<std::size_t>(target.rows()));
    const std::span<const double> p(prediction.col(v).data(), static_cast<std::size_t>(prediction.rows()));
    sum += pearson(t, p);
  }
  return sum / static_cast<double>(units);
}

SoftMatchAlignment softmatch_align(const ActivationMatrix& x_i, const ActivationMatrix& x_j,
                                   const MetricConfig& config) {
  require_centered(x_i, "softmatch_score");
  require_centered(x_j, "softmatch_score");
  require_same_stimuli(x_i, x_j, "softmatch_score");
  const Matrix& src = x_i.data();
  const Matrix& dst = x_j.data();
  Matrix cost(src.cols(), dst.cols());
  for (Eigen::Index u = 0; u < src.cols(); ++u)
    for (Eigen::Index v = 0; v < dst.cols(); ++v) cost(u, v) = (src.col(u) - dst.col(v)).squaredNorm();

  SoftMatchAlignment out;
  out.transport = solve_transport(cost);
  out.alignment = out.transport.plan;
  for (Eigen::Index v = 0; v < out.alignment.cols(); ++v) out.alignment.col(v) /= out.alignment.col(v).sum();
  const Matrix aligned = src * out.alignment;
  out.score = alignment_correlation(dst, aligned, config.aggregation);
  return out;
}

double softmatch_score(const ActivationMatrix& x_i, const ActivationMatrix& x_j, const MetricConfig& config) {
  return softmatch_align(x_i, x_j, config).score;
}

double procrustes_score(const ActivationMatrix& x_i, const ActivationMatrix& x_j, const MetricConfig& config) {
  require_centered(x_i, "procrustes_score");
  require_centered(x_j, "procrustes_score");
  require_same_stimuli(x_i, x_j, "procrustes_score");
  const Eigen::Index width = std::max(x_i.units(), x_j.units());
  const auto src = zero_pad(x_i, width);
  const auto dst = zero_pad(x_j, width);
  const auto rotation = procrustes_solve(src.data(), dst.data());
  const Matrix aligned = src.data() * rotation.matrix.transpose();
  return alignment_correlation(dst.data(), aligned, config.aggregation, x_j.units());
}

double linear_predictivity_score(const ActivationMatrix& x_i, const ActivationMatrix& x_j,
                                 const MetricConfig& config) {
  require_centered(x_i, "linear_predictivity_score");
  require_centered(x_j, "linear_predictivity_score");
  require_same_stimuli(x_i, x_j, "linear_predictivity_score");
  const auto map = least_squares(x_i.data(), x_j.data());
  const Matrix predicted = x_i.data() * map.matrix.transpose();
  return alignment_correlation(x_j.data(), predicted, config.aggregation);
}

double similarity_score(Metric metric, const ActivationMatrix& x_i, const ActivationMatrix& x_j,
                        const MetricConfig& config) {
  switch (metric) {
    case Metric::rsa: return rsa_score(x_i, x_j, config);
    case Metric::softmatch: return softmatch_score(x_i, x_j, config);
    case Metric::procrustes: return procrustes_score(x_i, x_j, config);
    case Metric::linear_predictivity: return linear_predictivity_score(x_i, x_j, config);
  }
  throw Error("similarity_score: unknown metric");
}

SimilarityMatrix pairwise_similarity(std::span<const ActivationMatrix> models, Metric metric,
                                     const MetricConfig& config, unsigned jobs) {
  std::vector<ActivationMatrix> centered;
  centered.reserve(models.size());
  for (const auto& m : models) {
    if (!centered.empty() && m.stimuli() != centered.front().stimuli())
      throw Error("pairwise_similarity: stimulus count mismatch ('" + m.model_id() + "' has " +
                  std::to_string(m.stimuli()) + ", '" + centered.front().model_id() + "' has " +
                  std::to_string(centered.front().stimuli()) + ")");
    centered.push_back(m.centered() ? m : center_columns(m));
  }

  const auto k = static_cast<Eigen::Index>(centered.size());
  SimilarityMatrix sim;
  sim.metric = metric;
  for (const auto& m : centered) sim.model_ids.push_back(m.model_id());
  sim.scores = Matrix::Identity(k, k);
  sim.symmetrized = true;
  if (k < 2) return sim;

  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i + 1; j < k; ++j) pairs.emplace_back(i, j);

  if (metric == Metric::rsa) {
    std::vector<RDM> rdms(static_cast<std::size_t>(k));
    parallel_for(rdms.size(), jobs, [&](std::size_t i) { rdms[i] = compute_rdm(centered[i], config); });
    parallel_for(pairs.size(), jobs, [&](std::size_t p) {
      const auto [i, j] = pairs[p];
      const double s = rsa_score(rdms[static_cast<std::size_t>(i)], rdms[static_cast<std::size_t>(j)]);
      sim.scores(i, j) = s;
      sim.scores(j, i) = s;
    });
    return sim;
  }

  parallel_for(pairs.size(), jobs, [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    const auto& a = centered[static_cast<std::size_t>(i)];
    const auto& b = centered[static_cast<std::size_t>(j)];
    const double forward = similarity_score(metric, a, b, config);
    const double backward = similarity_score(metric, b, a, config);
    const double s = std::clamp(0.5 * (forward + backward), -1.0, 1.0);
    sim.scores(i, j) = s;
    sim.scores(j, i) = s;
  });
  return sim;
}

std::vector<ActivationMatrix> load_models(const std::vector<ModelRecord>& records) {
  std::vector<ActivationMatrix> models;
  models.reserve(records.size());
  for (const auto& rec : records) {
    models.push_back(center_columns(load_activation_matrix(rec.path, rec.model_id)));
    const auto& first = models.front();
    if (models.back().stimuli() != first.stimuli())
      throw Error("stimulus count mismatch: '" + rec.model_id + "' has " + std::to_string(models.back().stimuli()) +
                  " stimuli, '" + first.model_id() + "' has " + std::to_string(first.stimuli()));
  }
  return models;
}

SimilarityMatrix pairwise_similarity(const std::vector<ModelRecord>& records, Metric metric,
                                     const MetricConfig& config, unsigned jobs) {
  const auto models = load_models(records);
  return pairwise_similarity(std::span<const ActivationMatrix>(models), metric, config, jobs);
}

}  // namespace repsep

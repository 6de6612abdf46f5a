#pragma once

#include <span>
#include <vector>

#include "repsep/data_model.hpp"

namespace repsep {

/// M in O(N): an N x N matrix with M^T M = I.
struct OrthogonalMap {
  Matrix matrix;
};

/// Unconstrained map B (Nj x Ni) predicting target rows as B * source rows.
struct LinearMap {
  Matrix matrix;
};

struct Correlation {
  double value = 0.0;
  /// Set when either input has (numerically) zero variance; value is 0.
  bool degenerate = false;
};

Correlation pearson_checked(std::span<const double> a, std::span<const double> b);
double pearson(std::span<const double> a, std::span<const double> b);

/// 1-based ranks; tied values share the average of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

Correlation spearman_checked(std::span<const double> a, std::span<const double> b);
double spearman(std::span<const double> a, std::span<const double> b);

/// Minimum-norm solution of min ||Y - X B^T||_F via an SVD pseudoinverse;
/// singular values below 1e-10 times the largest are treated as zero.
LinearMap least_squares(const Matrix& x, const Matrix& y);

/// R = U V^T from the SVD of Y^T X; minimizes ||Y - X R^T||_F over O(N).
OrthogonalMap procrustes_solve(const Matrix& x, const Matrix& y);

/// Appends zero columns up to `target_units`.
ActivationMatrix zero_pad(const ActivationMatrix& x, Eigen::Index target_units);

inline constexpr double kPinvRelativeCutoff = 1e-10;

}  // namespace repsep

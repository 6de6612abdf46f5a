#include "repsep/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace repsep {
namespace {

void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error("correlation: length mismatch (" + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  if (a.size() < 2) throw Error("correlation: need at least 2 observations");
}

}  // namespace

Correlation pearson_checked(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b);
  const double n = static_cast<double>(a.size());
  const double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0, max_a = 0, max_b = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
    max_a = std::max(max_a, std::abs(a[i]));
    max_b = std::max(max_b, std::abs(b[i]));
  }
  // Variance indistinguishable from rounding noise on the raw values.
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const auto flat = [&](double ss, double scale) { return ss <= n * (16 * eps * scale) * (16 * eps * scale); };
  if (saa == 0 || sbb == 0 || flat(saa, max_a) || flat(sbb, max_b)) return {0.0, true};
  const double r = sab / std::sqrt(saa * sbb);
  return {std::clamp(r, -1.0, 1.0), false};
}

double pearson(std::span<const double> a, std::span<const double> b) { return pearson_checked(a, b).value; }

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // positions i..j-1 hold ranks i+1..j
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

Correlation spearman_checked(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b);
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  return pearson_checked(ra, rb);
}

double spearman(std::span<const double> a, std::span<const double> b) { return spearman_checked(a, b).value; }

LinearMap least_squares(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows())
    throw Error("least_squares: stimulus count mismatch (" + std::to_string(x.rows()) + " vs " +
                std::to_string(y.rows()) + ")");
  if (!x.allFinite() || !y.allFinite()) throw Error("least_squares: non-finite input");
  Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double cutoff = s.size() ? kPinvRelativeCutoff * s(0) : 0.0;
  Vector inv = Vector::Zero(s.size());
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > cutoff) inv(k) = 1.0 / s(k);
  // B^T = V S^+ U^T Y
  const Matrix bt = svd.matrixV() * inv.asDiagonal() * (svd.matrixU().transpose() * y);
  return {bt.transpose()};
}

OrthogonalMap procrustes_solve(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw Error("procrustes_solve: shape mismatch (" + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                " vs " + std::to_string(y.rows()) + "x" + std::to_string(y.cols()) + ")");
  if (!x.allFinite() || !y.allFinite()) throw Error("procrustes_solve: non-finite input");
  const Matrix cross = y.transpose() * x;
  Eigen::BDCSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw Error("procrustes_solve: SVD failed");
  return {svd.matrixU() * svd.matrixV().transpose()};
}

ActivationMatrix zero_pad(const ActivationMatrix& x, Eigen::Index target_units) {
  if (target_units < x.units())
    throw Error("zero_pad: target width " + std::to_string(target_units) + " is smaller than " +
                std::to_string(x.units()) + " units of '" + x.model_id() + "'");
  if (target_units == x.units()) return x;
  Matrix padded = Matrix::Zero(x.stimuli(), target_units);
  padded.leftCols(x.units()) = x.data();
  return ActivationMatrix(x.model_id(), std::move(padded), x.centered());
}

}  // namespace repsep

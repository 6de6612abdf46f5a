// Shared generators and test-only oracles. Nothing here calls into the
// code paths it is used to check.
#pragma once

#include <algorithm>
#include <cstring>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "repsep/data_model.hpp"

namespace testing {

using repsep::Matrix;

inline Matrix gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

inline Matrix centered_gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m = gaussian(rng, rows, cols);
  m.rowwise() -= m.colwise().mean();
  return m;
}

inline repsep::ActivationMatrix centered_model(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                                               const std::string& id = "x") {
  return repsep::center_columns(repsep::ActivationMatrix(id, gaussian(rng, rows, cols)));
}

/// Random orthogonal matrix via QR of a Gaussian matrix.
inline Matrix random_orthogonal(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(rng, n, n));
  return qr.householderQ() * Matrix::Identity(n, n);
}

inline Matrix permutation_matrix(const std::vector<Eigen::Index>& perm) {
  const auto n = static_cast<Eigen::Index>(perm.size());
  Matrix p = Matrix::Zero(n, n);
  // column v of X * P is column perm[v] of X
  for (Eigen::Index v = 0; v < n; ++v) p(perm[static_cast<std::size_t>(v)], v) = 1.0;
  return p;
}

inline std::vector<Eigen::Index> random_permutation(std::mt19937_64& rng, Eigen::Index n) {
  std::vector<Eigen::Index> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), Eigen::Index{0});
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

inline Matrix random_integer_costs(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, int hi = 99) {
  std::uniform_int_distribution<int> d(0, hi);
  Matrix c(rows, cols);
  for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = d(rng);
  return c;
}

/// Textbook two-pass product-moment correlation.
inline double naive_pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i] / n;
    mb += b[i] / n;
  }
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

/// Minimum permutation cost sum_i cost(i, pi(i)) by enumeration.
inline double min_permutation_sum(const Matrix& cost) {
  std::vector<Eigen::Index> p(static_cast<std::size_t>(cost.rows()));
  std::iota(p.begin(), p.end(), Eigen::Index{0});
  double best = INFINITY;
  do {
    double s = 0;
    for (Eigen::Index i = 0; i < cost.rows(); ++i) s += cost(i, p[static_cast<std::size_t>(i)]);
    best = std::min(best, s);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

/// Fraction of (positive, negative) pairs ordered correctly, ties counted half.
inline double pair_enumeration_auc(const std::vector<double>& pos, const std::vector<double>& neg) {
  double credit = 0;
  for (double p : pos)
    for (double n : neg) credit += p > n ? 1.0 : (p == n ? 0.5 : 0.0);
  return credit / static_cast<double>(pos.size() * neg.size());
}

/// Writes a version 1.0 '<f4' NPY file byte by byte.
inline void write_npy_f4(const std::filesystem::path& path, const std::vector<float>& row_major, int rows, int cols,
                         const std::string& descr = "<f4", const std::string& shape_override = "") {
  std::string dict = "{'descr': '" + descr + "', 'fortran_order': False, 'shape': " +
                     (shape_override.empty() ? "(" + std::to_string(rows) + ", " + std::to_string(cols) + ")"
                                             : shape_override) +
                     ", }";
  while ((10 + dict.size() + 1) % 16 != 0) dict.push_back(' ');
  dict.push_back('\n');
  std::ofstream out(path, std::ios::binary);
  out.write("\x93NUMPY\x01\x00", 8);
  const unsigned char len[2] = {static_cast<unsigned char>(dict.size() & 0xff),
                                static_cast<unsigned char>(dict.size() >> 8)};
  out.write(reinterpret_cast<const char*>(len), 2);
  out << dict;
  for (float f : row_major) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    const unsigned char b[4] = {static_cast<unsigned char>(bits), static_cast<unsigned char>(bits >> 8),
                                static_cast<unsigned char>(bits >> 16), static_cast<unsigned char>(bits >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
  }
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("repsep_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testing

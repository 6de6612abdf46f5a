#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "repsep/error.hpp"

namespace repsep {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Stimuli x units activation table for one model. Rows are stimuli (M),
/// columns are units (N). Immutable once constructed; the constructor
/// enforces M >= 2, N >= 1 and finite entries.
class ActivationMatrix {
 public:
  ActivationMatrix(std::string model_id, Matrix data, bool centered = false);

  const std::string& model_id() const noexcept { return model_id_; }
  const Matrix& data() const noexcept { return data_; }
  bool centered() const noexcept { return centered_; }

  Eigen::Index stimuli() const noexcept { return data_.rows(); }
  Eigen::Index units() const noexcept { return data_.cols(); }

 private:
  std::string model_id_;
  Matrix data_;
  bool centered_;
};

struct ModelRecord {
  std::string model_id;
  std::string family;
  std::filesystem::path path;
};

/// Reads a JSON manifest `{"models": [{"id", "family", "path", "meta"?}, ...]}`.
/// Relative paths are resolved against the manifest's directory.
std::vector<ModelRecord> load_manifest(const std::filesystem::path& path);

/// Loads an NPY (.npy) or headerless CSV activation file; the format is
/// chosen from the file's magic bytes, not its extension. The model id is
/// the file stem unless given.
ActivationMatrix load_activation_matrix(const std::filesystem::path& path,
                                        std::string model_id = {});

/// Subtracts every column's mean. Constant columns become exactly zero.
ActivationMatrix center_columns(const ActivationMatrix& x);

void write_activation_npy(const std::filesystem::path& path, const Matrix& data);
void write_activation_csv(const std::filesystem::path& path, const Matrix& data);

}  // namespace repsep

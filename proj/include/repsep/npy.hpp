#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace repsep::npy {

inline constexpr std::string_view kMagic{"\x93NUMPY", 6};

struct Header {
  std::string descr;
  bool fortran_order = false;
  std::vector<std::uint64_t> shape;
};

/// Parses the python-literal header dict, e.g.
/// `{'descr': '<f8', 'fortran_order': False, 'shape': (3, 2), }`.
Header parse_header_dict(std::string_view dict);

/// A 2-D C-order array widened to double, row-major.
struct Array2D {
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::vector<double> values;
};

/// Accepts format versions 1.0, 2.0 and 3.0 with little-endian '<f4' or
/// '<f8' payloads. Anything else (big-endian, integers, Fortran order,
/// non-2-D shapes, truncated payloads) throws repsep::Error.
Array2D read(const std::filesystem::path& path);

/// Writes a version 1.0 '<f8' C-order file.
void write(const std::filesystem::path& path, std::uint64_t rows, std::uint64_t cols,
           const std::vector<double>& row_major);

}  // namespace repsep::npy

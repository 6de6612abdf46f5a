#include "repsep/data_model.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "repsep/format.hpp"
#include "repsep/npy.hpp"

namespace repsep {
namespace fs = std::filesystem;
using json = nlohmann::json;

ActivationMatrix::ActivationMatrix(std::string model_id, Matrix data, bool centered)
    : model_id_(std::move(model_id)), data_(std::move(data)), centered_(centered) {
  if (data_.rows() < 2 || data_.cols() < 1)
    throw Error("activation matrix '" + model_id_ + "' must have M >= 2 stimuli and N >= 1 units (got " +
                std::to_string(data_.rows()) + "x" + std::to_string(data_.cols()) + ")");
  if (!data_.allFinite()) throw Error("activation matrix '" + model_id_ + "' contains NaN or Inf entries");
  if (centered_) {
    for (Eigen::Index c = 0; c < data_.cols(); ++c) {
      const double scale = data_.col(c).cwiseAbs().maxCoeff();
      if (std::abs(data_.col(c).mean()) > 1e-8 * std::max(scale, 1e-300))
        throw Error("activation matrix '" + model_id_ + "' flagged centered but column " + std::to_string(c) +
                    " has nonzero mean");
    }
  }
}

std::vector<ModelRecord> load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error("manifest " + path.string() + ": parse error: " + e.what());
  }
  if (!doc.is_object() || !doc.contains("models") || !doc["models"].is_array())
    throw Error("manifest " + path.string() + ": expected a top-level \"models\" array");

  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::vector<ModelRecord> records;
  std::set<std::string> seen;
  const auto& models = doc["models"];
  for (std::size_t i = 0; i < models.size(); ++i) {
    const auto& entry = models[i];
    const auto field = [&](const char* key) -> std::string {
      if (!entry.is_object() || !entry.contains(key) || !entry[key].is_string())
        throw Error("manifest " + path.string() + ": entry " + std::to_string(i) + " is missing string field \"" +
                    key + "\"");
      return entry[key].get<std::string>();
    };
    ModelRecord rec{field("id"), field("family"), field("path")};
    if (rec.model_id.empty())
      throw Error("manifest " + path.string() + ": entry " + std::to_string(i) + " has an empty id");
    if (rec.family.empty())
      throw Error("manifest " + path.string() + ": entry " + std::to_string(i) + " (" + rec.model_id +
                  ") has an empty family");
    if (!seen.insert(rec.model_id).second)
      throw Error("manifest " + path.string() + ": entry " + std::to_string(i) + " duplicates model id \"" +
                  rec.model_id + "\"");
    if (rec.path.is_relative()) rec.path = (base / rec.path).lexically_normal();
    records.push_back(std::move(rec));
  }
  return records;
}

namespace {

bool has_npy_magic(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  char head[6] = {};
  in.read(head, 6);
  return in.gcount() == 6 && std::string_view(head, 6) == npy::kMagic;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

Matrix read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto content = trim(line);
    if (content.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = content.find(',', start);
      const auto cell = trim(content.substr(start, comma == std::string_view::npos ? content.npos : comma - start));
      double value = 0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size())
        throw Error(path.string() + ":" + std::to_string(line_no) + ": cannot parse '" + std::string(cell) +
                    "' as a number");
      row.push_back(value);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(path.string() + ":" + std::to_string(line_no) + ": ragged row (" + std::to_string(row.size()) +
                  " values, expected " + std::to_string(rows.front().size()) + ")");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(path.string() + ": empty CSV");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return m;
}

}  // namespace

ActivationMatrix load_activation_matrix(const fs::path& path, std::string model_id) {
  if (!fs::exists(path)) throw Error("activation file not found: " + path.string());
  if (model_id.empty()) model_id = path.stem().string();
  Matrix data;
  if (has_npy_magic(path)) {
    const auto arr = npy::read(path);
    data.resize(static_cast<Eigen::Index>(arr.rows), static_cast<Eigen::Index>(arr.cols));
    for (std::uint64_t r = 0; r < arr.rows; ++r)
      for (std::uint64_t c = 0; c < arr.cols; ++c)
        data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = arr.values[r * arr.cols + c];
  } else {
    data = read_csv(path);
  }
  if (!data.allFinite()) throw Error(path.string() + ": contains NaN or Inf entries");
  try {
    return ActivationMatrix(std::move(model_id), std::move(data), false);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

ActivationMatrix center_columns(const ActivationMatrix& x) {
  Matrix centered = x.data();
  for (Eigen::Index c = 0; c < centered.cols(); ++c) {
    auto col = centered.col(c);
    if (col.maxCoeff() == col.minCoeff()) {
      col.setZero();
    } else {
      col.array() -= col.mean();
    }
  }
  return ActivationMatrix(x.model_id(), std::move(centered), true);
}

void write_activation_npy(const fs::path& path, const Matrix& data) {
  std::vector<double> row_major(static_cast<std::size_t>(data.size()));
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < data.rows(); ++r)
    for (Eigen::Index c = 0; c < data.cols(); ++c) row_major[k++] = data(r, c);
  npy::write(path, static_cast<std::uint64_t>(data.rows()), static_cast<std::uint64_t>(data.cols()), row_major);
}

void write_activation_csv(const fs::path& path, const Matrix& data) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
      if (c) out << ',';
      out << format_number(data(r, c));
    }
    out << '\n';
  }
}

}  // namespace repsep

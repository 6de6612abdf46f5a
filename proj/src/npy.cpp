#include "repsep/npy.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>

#include "repsep/error.hpp"

namespace repsep::npy {
namespace {

class DictCursor {
 public:
  explicit DictCursor(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  std::string quoted() {
    skip_space();
    if (pos_ >= text_.size() || (text_[pos_] != '\'' && text_[pos_] != '"')) fail("expected string");
    const char quote = text_[pos_++];
    const auto end = text_.find(quote, pos_);
    if (end == std::string_view::npos) fail("unterminated string");
    std::string out(text_.substr(pos_, end - pos_));
    pos_ = end + 1;
    return out;
  }

  std::string_view word() {
    skip_space();
    const auto start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  std::uint64_t integer() {
    skip_space();
    std::uint64_t value = 0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{}) fail("expected integer");
    pos_ += static_cast<std::size_t>(ptr - first);
    // Python 2 era writers append 'L' to longs.
    if (pos_ < text_.size() && text_[pos_] == 'L') ++pos_;
    return value;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw Error("npy: malformed header dict (" + why + " at offset " + std::to_string(pos_) +
                "): " + std::string(text_));
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

template <typename T>
T from_little_endian(const unsigned char* bytes) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, bytes, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  T out;
  std::memcpy(&out, buf, sizeof(T));
  return out;
}

std::uint32_t read_le_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

Header parse_header_dict(std::string_view dict) {
  DictCursor cur(dict);
  Header header;
  bool have_descr = false, have_order = false, have_shape = false;
  cur.expect('{');
  while (!cur.consume('}')) {
    const auto key = cur.quoted();
    cur.expect(':');
    if (key == "descr") {
      header.descr = cur.quoted();
      have_descr = true;
    } else if (key == "fortran_order") {
      const auto w = cur.word();
      if (w == "True") {
        header.fortran_order = true;
      } else if (w == "False") {
        header.fortran_order = false;
      } else {
        cur.fail("fortran_order must be True or False");
      }
      have_order = true;
    } else if (key == "shape") {
      cur.expect('(');
      while (!cur.consume(')')) {
        header.shape.push_back(cur.integer());
        if (!cur.consume(',')) {
          cur.expect(')');
          break;
        }
      }
      have_shape = true;
    } else {
      cur.fail("unknown key '" + key + "'");
    }
    if (!cur.consume(',')) {
      cur.expect('}');
      break;
    }
  }
  if (!have_descr || !have_order || !have_shape) cur.fail("missing descr, fortran_order or shape");
  return header;
}

Array2D read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto where = [&] { return path.string() + ": "; };

  if (bytes.size() < 10 || std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0)
    throw Error(where() + "not an NPY file (bad magic)");
  const unsigned major = bytes[6];
  std::size_t header_len = 0;
  std::size_t offset = 0;
  if (major == 1) {
    header_len = static_cast<std::size_t>(bytes[8]) | (static_cast<std::size_t>(bytes[9]) << 8);
    offset = 10;
  } else if (major == 2 || major == 3) {
    if (bytes.size() < 12) throw Error(where() + "truncated header");
    header_len = read_le_u32(bytes.data() + 8);
    offset = 12;
  } else {
    throw Error(where() + "unsupported NPY version " + std::to_string(major));
  }
  if (offset + header_len > bytes.size()) throw Error(where() + "truncated header");
  const std::string_view dict(reinterpret_cast<const char*>(bytes.data() + offset), header_len);
  const Header header = parse_header_dict(dict);

  if (header.fortran_order) throw Error(where() + "fortran_order=True is not supported");
  if (header.shape.size() != 2)
    throw Error(where() + "expected a 2-D array, got " + std::to_string(header.shape.size()) + "-D");
  std::size_t width = 0;
  if (header.descr == "<f8") {
    width = 8;
  } else if (header.descr == "<f4") {
    width = 4;
  } else {
    throw Error(where() + "unsupported dtype '" + header.descr + "' (need '<f4' or '<f8')");
  }

  Array2D out;
  out.rows = header.shape[0];
  out.cols = header.shape[1];
  const std::size_t count = out.rows * out.cols;
  const std::size_t data_offset = offset + header_len;
  if (bytes.size() - data_offset < count * width)
    throw Error(where() + "payload shorter than shape requires");
  out.values.resize(count);
  const unsigned char* p = bytes.data() + data_offset;
  for (std::size_t i = 0; i < count; ++i) {
    out.values[i] = width == 8 ? from_little_endian<double>(p + 8 * i)
                               : static_cast<double>(from_little_endian<float>(p + 4 * i));
  }
  return out;
}

void write(const std::filesystem::path& path, std::uint64_t rows, std::uint64_t cols,
           const std::vector<double>& row_major) {
  if (row_major.size() != rows * cols) throw Error("npy::write: value count does not match shape");
  std::string dict = "{'descr': '<f8', 'fortran_order': False, 'shape': (" + std::to_string(rows) +
                     ", " + std::to_string(cols) + "), }";
  // Pad so that magic + version + length + dict + '\n' is a multiple of 64.
  const std::size_t unpadded = kMagic.size() + 2 + 2 + dict.size() + 1;
  dict.append((64 - unpadded % 64) % 64, ' ');
  dict.push_back('\n');

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
  const char version[2] = {1, 0};
  out.write(version, 2);
  const char len[2] = {static_cast<char>(dict.size() & 0xff), static_cast<char>((dict.size() >> 8) & 0xff)};
  out.write(len, 2);
  out.write(dict.data(), static_cast<std::streamsize>(dict.size()));
  for (double v : row_major) {
    unsigned char buf[8];
    std::memcpy(buf, &v, 8);
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + 8);
    out.write(reinterpret_cast<const char*>(buf), 8);
  }
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace repsep::npy

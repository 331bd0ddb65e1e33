#include "vprkit/core/io.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "vprkit/core/error.h"

namespace vprkit {
namespace {

constexpr std::uint32_t kDescriptorVersion = 1;
constexpr std::uint32_t kBoolMatrixVersion = 1;

// Cursor over an in-memory byte buffer that tracks offsets for errors.
class ByteReader {
 public:
  explicit ByteReader(const std::string& bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  bool at_end() const { return pos_ >= bytes_.size(); }

  std::uint8_t u8() {
    require(1);
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }

  std::uint32_t u32() {
    require(4);
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) {
      v |= static_cast<std::uint32_t>(
               static_cast<unsigned char>(bytes_[pos_ + b]))
           << (8 * b);
    }
    pos_ += 4;
    return v;
  }

  float f32() { return std::bit_cast<float>(u32()); }

  std::string take(std::size_t n) {
    require(n);
    std::string out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  void require(std::size_t n) const {
    if (remaining() < n) {
      throw SizeError("unexpected end of data at byte " +
                      std::to_string(pos_) + ": need " + std::to_string(n) +
                      " more bytes, have " + std::to_string(remaining()));
    }
  }

  const std::string& bytes_;
  std::size_t pos_ = 0;
};

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) {
    out.push_back(static_cast<char>((v >> (8 * b)) & 0xFFu));
  }
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > 0xFFFFFFFFull) {
    throw SizeError(std::string(what) + " does not fit in 32 bits");
  }
  return static_cast<std::uint32_t>(v);
}

// --- PGM header tokenizer ---------------------------------------------------

bool is_pnm_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

void skip_space_and_comments(const std::string& b, std::size_t& pos) {
  while (pos < b.size()) {
    if (is_pnm_space(b[pos])) {
      ++pos;
    } else if (b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n' && b[pos] != '\r') ++pos;
    } else {
      break;
    }
  }
}

unsigned long read_header_uint(const std::string& b, std::size_t& pos,
                               const char* field) {
  skip_space_and_comments(b, pos);
  if (pos >= b.size()) {
    throw FormatError(std::string("PGM header ends before ") + field, pos);
  }
  if (!std::isdigit(static_cast<unsigned char>(b[pos]))) {
    throw FormatError(std::string("PGM expected digit for ") + field, pos);
  }
  const std::size_t start = pos;
  unsigned long v = 0;
  while (pos < b.size() && std::isdigit(static_cast<unsigned char>(b[pos]))) {
    v = v * 10 + static_cast<unsigned long>(b[pos] - '0');
    if (v > 0xFFFFFFFFul) {
      throw FormatError(std::string("PGM ") + field + " too large", start);
    }
    ++pos;
  }
  return v;
}

}  // namespace

// --- PGM --------------------------------------------------------------------

GrayImage parse_pgm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' ||
      (bytes[1] != '2' && bytes[1] != '5')) {
    throw FormatError("not a P2/P5 PGM file", 0);
  }
  const bool raw = bytes[1] == '5';
  std::size_t pos = 2;
  if (pos < bytes.size() && !is_pnm_space(bytes[pos]) && bytes[pos] != '#') {
    throw FormatError("PGM magic must be followed by whitespace", pos);
  }
  const std::size_t width_at = pos;
  const unsigned long width = read_header_uint(bytes, pos, "width");
  const unsigned long height = read_header_uint(bytes, pos, "height");
  const std::size_t maxval_at = pos;
  const unsigned long maxval = read_header_uint(bytes, pos, "maxval");
  if (width == 0 || height == 0) {
    throw FormatError("PGM dimensions must be positive", width_at);
  }
  if (maxval == 0 || maxval > 65535) {
    throw FormatError("PGM maxval must be in [1, 65535]", maxval_at);
  }
  const std::size_t count = static_cast<std::size_t>(width) * height;
  std::vector<double> data(count);
  const double denom = static_cast<double>(maxval);

  if (raw) {
    if (pos >= bytes.size() || !is_pnm_space(bytes[pos])) {
      throw FormatError("PGM header must end with one whitespace byte", pos);
    }
    ++pos;
    const std::size_t sample_bytes = maxval > 255 ? 2 : 1;
    const std::size_t need = count * sample_bytes;
    if (bytes.size() - pos < need) {
      throw SizeError("PGM raster truncated: need " + std::to_string(need) +
                      " bytes, have " + std::to_string(bytes.size() - pos));
    }
    for (std::size_t k = 0; k < count; ++k) {
      unsigned v = static_cast<unsigned char>(bytes[pos + k * sample_bytes]);
      if (sample_bytes == 2) {
        v = (v << 8) |
            static_cast<unsigned char>(bytes[pos + k * sample_bytes + 1]);
      }
      if (v > maxval) {
        throw FormatError("PGM sample exceeds maxval", pos + k * sample_bytes);
      }
      data[k] = v / denom;
    }
  } else {
    for (std::size_t k = 0; k < count; ++k) {
      skip_space_and_comments(bytes, pos);
      if (pos >= bytes.size()) {
        throw SizeError("PGM raster truncated: got " + std::to_string(k) +
                        " of " + std::to_string(count) + " samples");
      }
      const std::size_t at = pos;
      const unsigned long v = read_header_uint(bytes, pos, "sample");
      if (v > maxval) throw FormatError("PGM sample exceeds maxval", at);
      data[k] = static_cast<double>(v) / denom;
    }
  }
  return GrayImage(static_cast<int>(height), static_cast<int>(width),
                   std::move(data));
}

GrayImage load_pgm(const std::filesystem::path& path) {
  return parse_pgm(read_file(path));
}

std::string encode_pgm(const GrayImage& image, int maxval) {
  if (maxval < 1 || maxval > 65535) {
    throw ArgumentError("maxval must be in [1, 65535]");
  }
  std::string out = "P5\n" + std::to_string(image.width()) + " " +
                    std::to_string(image.height()) + "\n" +
                    std::to_string(maxval) + "\n";
  const bool wide = maxval > 255;
  for (double v : image.data()) {
    const auto q = static_cast<unsigned>(std::lround(v * maxval));
    if (wide) out.push_back(static_cast<char>((q >> 8) & 0xFFu));
    out.push_back(static_cast<char>(q & 0xFFu));
  }
  return out;
}

void write_pgm(const GrayImage& image, const std::filesystem::path& path,
               int maxval) {
  write_file(path, encode_pgm(image, maxval));
}

// --- VPRD -------------------------------------------------------------------

DescriptorMatrix decode_descriptors(const std::string& bytes) {
  ByteReader r(bytes);
  if (bytes.size() < 4 || bytes.compare(0, 4, "VPRD") != 0) {
    throw FormatError("bad magic, expected VPRD", 0);
  }
  r.take(4);
  const std::size_t version_at = r.offset();
  const std::uint32_t version = r.u32();
  if (version != kDescriptorVersion) {
    throw FormatError("unsupported VPRD version " + std::to_string(version),
                      version_at);
  }
  const std::uint32_t n = r.u32();
  const std::uint32_t d = r.u32();
  const std::size_t flag_at = r.offset();
  const std::uint8_t has_labels = r.u8();
  if (has_labels > 1) throw FormatError("has_labels must be 0 or 1", flag_at);

  const std::size_t payload = static_cast<std::size_t>(n) * d * 4;
  if (r.remaining() < payload || (!has_labels && r.remaining() != payload)) {
    throw SizeError("VPRD payload length mismatch: header says " +
                    std::to_string(n) + "x" + std::to_string(d) + " (" +
                    std::to_string(payload) + " bytes), file has " +
                    std::to_string(r.remaining()));
  }
  Matrix values(n, d);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < d; ++j) values(i, j) = r.f32();
  }
  std::vector<std::string> labels;
  if (has_labels) {
    labels.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::uint32_t len = r.u32();
      labels.push_back(r.take(len));
    }
    if (!r.at_end()) {
      throw SizeError("VPRD has " + std::to_string(r.remaining()) +
                      " trailing bytes after labels");
    }
  }
  return DescriptorMatrix(std::move(values), std::move(labels));
}

DescriptorMatrix read_descriptors(const std::filesystem::path& path) {
  return decode_descriptors(read_file(path));
}

std::string encode_descriptors(const DescriptorMatrix& m) {
  if (m.has_labels() && m.labels.size() != static_cast<std::size_t>(m.n())) {
    throw SizeError("label count does not match row count");
  }
  std::string out = "VPRD";
  put_u32(out, kDescriptorVersion);
  put_u32(out, checked_u32(static_cast<std::size_t>(m.n()), "n"));
  put_u32(out, checked_u32(static_cast<std::size_t>(m.d()), "d"));
  out.push_back(m.has_labels() ? 1 : 0);
  out.reserve(out.size() + static_cast<std::size_t>(m.n() * m.d()) * 4);
  for (Eigen::Index i = 0; i < m.n(); ++i) {
    for (Eigen::Index j = 0; j < m.d(); ++j) {
      put_u32(out, std::bit_cast<std::uint32_t>(
                       static_cast<float>(m.values(i, j))));
    }
  }
  for (const auto& label : m.labels) {
    put_u32(out, checked_u32(label.size(), "label length"));
    out += label;
  }
  return out;
}

void write_descriptors(const DescriptorMatrix& m,
                       const std::filesystem::path& path) {
  write_file(path, encode_descriptors(m));
}

// --- VPRB -------------------------------------------------------------------

BoolMatrix decode_bool_matrix(const std::string& bytes) {
  if (bytes.size() < 4 || bytes.compare(0, 4, "VPRB") != 0) {
    throw FormatError("bad magic, expected VPRB", 0);
  }
  ByteReader r(bytes);
  r.take(4);
  const std::size_t version_at = r.offset();
  const std::uint32_t version = r.u32();
  if (version != kBoolMatrixVersion) {
    throw FormatError("unsupported VPRB version " + std::to_string(version),
                      version_at);
  }
  const std::uint32_t rows = r.u32();
  const std::uint32_t cols = r.u32();
  const std::size_t row_bytes = (static_cast<std::size_t>(cols) + 7) / 8;
  if (r.remaining() != row_bytes * rows) {
    throw SizeError("VPRB payload length mismatch: expected " +
                    std::to_string(row_bytes * rows) + " bytes, have " +
                    std::to_string(r.remaining()));
  }
  BoolMatrix m(rows, cols);
  for (std::uint32_t i = 0; i < rows; ++i) {
    const std::string row = r.take(row_bytes);
    for (std::uint32_t j = 0; j < cols; ++j) {
      const auto byte = static_cast<unsigned char>(row[j / 8]);
      if (byte & (0x80u >> (j % 8))) m.set(i, j);
    }
  }
  return m;
}

BoolMatrix read_bool_matrix(const std::filesystem::path& path) {
  return decode_bool_matrix(read_file(path));
}

std::string encode_bool_matrix(const BoolMatrix& m) {
  std::string out = "VPRB";
  put_u32(out, kBoolMatrixVersion);
  put_u32(out, checked_u32(m.rows(), "rows"));
  put_u32(out, checked_u32(m.cols(), "cols"));
  const std::size_t row_bytes = (m.cols() + 7) / 8;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::string row(row_bytes, '\0');
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j)) {
        row[j / 8] = static_cast<char>(static_cast<unsigned char>(row[j / 8]) |
                                       (0x80u >> (j % 8)));
      }
    }
    out += row;
  }
  return out;
}

void write_bool_matrix(const BoolMatrix& m, const std::filesystem::path& path) {
  write_file(path, encode_bool_matrix(m));
}

// --- text formats -----------------------------------------------------------

std::vector<IndexPair> parse_pairs(const std::string& text) {
  std::vector<IndexPair> pairs;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t line_offset = offset;
    offset += line.size() + 1;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    std::istringstream fields(line);
    long long i = 0;
    long long j = 0;
    std::string extra;
    if (!(fields >> i)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw FormatError("pairs line " + std::to_string(line_no) +
                            ": expected 'i j'",
                        line_offset);
    }
    if (!(fields >> j) || (fields >> extra) || i < 0 || j < 0) {
      throw FormatError("pairs line " + std::to_string(line_no) +
                            ": expected two non-negative integers",
                        line_offset);
    }
    pairs.emplace_back(static_cast<std::size_t>(i),
                       static_cast<std::size_t>(j));
  }
  return pairs;
}

std::vector<IndexPair> read_pairs(const std::filesystem::path& path) {
  return parse_pairs(read_file(path));
}

void write_pairs(const std::vector<IndexPair>& pairs,
                 const std::filesystem::path& path) {
  std::string out;
  for (const auto& [i, j] : pairs) {
    out += std::to_string(i) + " " + std::to_string(j) + "\n";
  }
  write_file(path, out);
}

std::vector<IndexPair> true_cells(const BoolMatrix& m) {
  std::vector<IndexPair> out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

std::vector<int> read_place_ids(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<int> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      ids.push_back(std::stoi(line, &used));
      if (line.find_first_not_of(" \t\r", used) != std::string::npos) {
        throw std::invalid_argument("trailing");
      }
    } catch (const std::exception&) {
      throw FormatError("place id line " + std::to_string(line_no) +
                            " is not an integer",
                        0);
    }
  }
  return ids;
}

void write_place_ids(const std::vector<int>& ids,
                     const std::filesystem::path& path) {
  std::string out;
  for (int id : ids) out += std::to_string(id) + "\n";
  write_file(path, out);
}

GrayImage similarity_heatmap(const SimilarityMatrix& s) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
      const double v = s(i, j);
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  std::vector<double> data(static_cast<std::size_t>(s.rows() * s.cols()), 0.0);
  const double span = hi - lo;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
      const double v = s(i, j);
      if (!std::isfinite(v) || !(span > 0.0)) continue;
      data[static_cast<std::size_t>(i * s.cols() + j)] =
          std::clamp((v - lo) / span, 0.0, 1.0);
    }
  }
  return GrayImage(static_cast<int>(s.rows()), static_cast<int>(s.cols()),
                   std::move(data));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace vprkit

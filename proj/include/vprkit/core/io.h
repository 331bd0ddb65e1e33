#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "vprkit/core/types.h"

namespace vprkit {

// Netpbm graymaps, plain (P2) or raw (P5). 16-bit raw samples are big-endian.
// Intensities are divided by maxval.
GrayImage load_pgm(const std::filesystem::path& path);
GrayImage parse_pgm(const std::string& bytes);

// Writes a P5 file. Samples are round(v * maxval).
void write_pgm(const GrayImage& image, const std::filesystem::path& path,
               int maxval = 255);
std::string encode_pgm(const GrayImage& image, int maxval = 255);

// "VPRD" descriptor files:
//   magic "VPRD" | u32 version=1 | u32 n | u32 d | u8 has_labels
//   | n*d float32 row-major | [n x (u32 length, UTF-8 bytes)]
// All integers and floats little-endian. Values are stored as float32, so a
// write/read cycle rounds doubles to single precision.
DescriptorMatrix read_descriptors(const std::filesystem::path& path);
DescriptorMatrix decode_descriptors(const std::string& bytes);
void write_descriptors(const DescriptorMatrix& m,
                       const std::filesystem::path& path);
std::string encode_descriptors(const DescriptorMatrix& m);

// "VPRB" boolean matrices: magic | u32 version=1 | u32 rows | u32 cols |
// row-major bits, most significant bit first, each row padded to a byte.
BoolMatrix read_bool_matrix(const std::filesystem::path& path);
BoolMatrix decode_bool_matrix(const std::string& bytes);
void write_bool_matrix(const BoolMatrix& m, const std::filesystem::path& path);
std::string encode_bool_matrix(const BoolMatrix& m);

using IndexPair = std::pair<std::size_t, std::size_t>;

// "i j" per line, zero based, '#' starts a comment.
std::vector<IndexPair> read_pairs(const std::filesystem::path& path);
std::vector<IndexPair> parse_pairs(const std::string& text);
void write_pairs(const std::vector<IndexPair>& pairs,
                 const std::filesystem::path& path);
std::vector<IndexPair> true_cells(const BoolMatrix& m);

// One integer per line.
std::vector<int> read_place_ids(const std::filesystem::path& path);
void write_place_ids(const std::vector<int>& ids,
                     const std::filesystem::path& path);

// Affine min-max mapping of the finite cells to [0, 255]; excluded cells
// are black.
GrayImage similarity_heatmap(const SimilarityMatrix& s);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace vprkit

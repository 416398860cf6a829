#pragma once

// Binary PNM (P5 graymap / P6 pixmap, 8-bit) reading and writing, and the
// image/video <-> Tensor3 conversions built on it.

#include "srtd/tensor3.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace srtd {

struct PnmImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t channels = 0; ///< 1 (P5) or 3 (P6)
  int maxval = 255;
  std::vector<std::uint8_t> pixels; ///< row-major, channels interleaved
};

/// Throws FormatError (with the byte offset of the problem) on malformed or
/// unsupported input, IoError if the file cannot be opened.
PnmImage read_pnm(const std::filesystem::path& path);
PnmImage parse_pnm(const std::vector<std::uint8_t>& bytes);
void write_pnm(const PnmImage& image, const std::filesystem::path& path);

/// Height x width x channels tensor with raw sample values (0..255).
Tensor3 load_image(const std::filesystem::path& path);

/// Writes n3 == 1 as P5 and n3 == 3 as P6 after clamping to [0, 255] and
/// rounding half away from zero.
void save_image(const Tensor3& t, const std::filesystem::path& path);

/// Quantize a single value the way save_image does.
std::uint8_t to_byte(double v);

/// Frames of a grayscale video: either a directory (every .pgm/.pnm file in
/// it) or a pattern whose file-name part contains '*' or '?'. Frames are
/// taken in lexicographic file-name order and stacked as frontal slices.
Tensor3 load_video(const std::filesystem::path& dir_or_glob);

/// Sorted list of frame files load_video would read.
std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir_or_glob);

/// Writes each frontal slice as <dir>/<stem>_NNNN.pgm.
void save_video(const Tensor3& t, const std::filesystem::path& dir, const std::string& stem);

} // namespace srtd

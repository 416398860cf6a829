#include "srtd/pnm.hpp"

#include "srtd/errors.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

namespace srtd {

namespace fs = std::filesystem;

namespace {

class HeaderReader {
public:
  explicit HeaderReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t read_uint(const char* field) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    std::size_t value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + std::size_t(bytes_[pos_] - '0');
      if (value > (std::size_t(1) << 31)) throw FormatError(std::string("PNM: ") + field + " too large", start);
      ++pos_;
    }
    if (pos_ == start) throw FormatError(std::string("PNM: expected ") + field, start);
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void expect_single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
      throw FormatError("PNM: expected whitespace after maxval", pos_);
    ++pos_;
  }

private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 2;
};

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool is_frame_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  return ext == ".pgm" || ext == ".pnm";
}

} // namespace

PnmImage parse_pnm(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') throw FormatError("PNM: missing magic number", 0);
  PnmImage img;
  if (bytes[1] == '5')
    img.channels = 1;
  else if (bytes[1] == '6')
    img.channels = 3;
  else
    throw FormatError("PNM: unsupported type P" + std::string(1, char(bytes[1])) + " (only binary P5/P6)", 1);

  HeaderReader hdr(bytes);
  hdr.skip_space_and_comments();
  const std::size_t size_at = hdr.pos();
  img.width = hdr.read_uint("width");
  img.height = hdr.read_uint("height");
  if (img.width == 0 || img.height == 0) throw FormatError("PNM: zero image dimension", size_at);
  hdr.skip_space_and_comments();
  const std::size_t maxval_at = hdr.pos();
  const std::size_t maxval = hdr.read_uint("maxval");
  if (maxval == 0 || maxval > 255) throw FormatError("PNM: only 8-bit maxval (1..255) is supported", maxval_at);
  img.maxval = int(maxval);
  hdr.expect_single_space();

  const std::size_t raster = img.width * img.height * img.channels;
  if (bytes.size() - hdr.pos() < raster)
    throw FormatError("PNM: truncated raster, expected " + std::to_string(raster) + " bytes", bytes.size());
  img.pixels.assign(bytes.begin() + std::ptrdiff_t(hdr.pos()), bytes.begin() + std::ptrdiff_t(hdr.pos() + raster));
  return img;
}

PnmImage read_pnm(const fs::path& path) { return parse_pnm(read_file(path)); }

void write_pnm(const PnmImage& image, const fs::path& path) {
  if (image.channels != 1 && image.channels != 3)
    throw ParameterError("write_pnm: channels must be 1 or 3");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << (image.channels == 1 ? "P5" : "P6") << '\n'
      << image.width << ' ' << image.height << '\n'
      << image.maxval << '\n';
  out.write(reinterpret_cast<const char*>(image.pixels.data()), std::streamsize(image.pixels.size()));
  if (!out) throw IoError("short write to " + path.string());
}

Tensor3 load_image(const fs::path& path) {
  const PnmImage img = read_pnm(path);
  Tensor3 t(img.height, img.width, img.channels);
  for (std::size_t r = 0; r < img.height; ++r)
    for (std::size_t c = 0; c < img.width; ++c)
      for (std::size_t ch = 0; ch < img.channels; ++ch)
        t(r, c, ch) = img.pixels[(r * img.width + c) * img.channels + ch];
  return t;
}

std::uint8_t to_byte(double v) {
  // Also maps NaN to 0.
  if (!(v > 0.0)) return 0;
  if (v >= 255.0) return 255;
  return std::uint8_t(std::round(v));
}

void save_image(const Tensor3& t, const fs::path& path) {
  if (t.n3() != 1 && t.n3() != 3)
    throw ParameterError("save_image: n3 must be 1 or 3, got " + std::to_string(t.n3()));
  PnmImage img;
  img.height = t.n1();
  img.width = t.n2();
  img.channels = t.n3();
  img.pixels.resize(t.size());
  for (std::size_t r = 0; r < img.height; ++r)
    for (std::size_t c = 0; c < img.width; ++c)
      for (std::size_t ch = 0; ch < img.channels; ++ch)
        img.pixels[(r * img.width + c) * img.channels + ch] = to_byte(t(r, c, ch));
  write_pnm(img, path);
}

std::vector<fs::path> list_frames(const fs::path& dir_or_glob) {
  std::vector<fs::path> frames;
  std::error_code ec;
  if (fs::is_directory(dir_or_glob, ec)) {
    for (const auto& entry : fs::directory_iterator(dir_or_glob))
      if (entry.is_regular_file() && is_frame_file(entry.path())) frames.push_back(entry.path());
  } else {
    const std::string pattern = dir_or_glob.filename().string();
    if (pattern.find_first_of("*?[") == std::string::npos) {
      if (!fs::exists(dir_or_glob, ec)) throw IoError("no such file or directory: " + dir_or_glob.string());
      frames.push_back(dir_or_glob);
    } else {
      fs::path parent = dir_or_glob.parent_path();
      if (parent.empty()) parent = ".";
      if (!fs::is_directory(parent, ec)) throw IoError("no such directory: " + parent.string());
      for (const auto& entry : fs::directory_iterator(parent))
        if (entry.is_regular_file() && fnmatch(pattern.c_str(), entry.path().filename().c_str(), 0) == 0)
          frames.push_back(entry.path());
    }
  }
  std::sort(frames.begin(), frames.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  if (frames.empty()) throw IoError("no frames found at " + dir_or_glob.string());
  return frames;
}

Tensor3 load_video(const fs::path& dir_or_glob) {
  const auto frames = list_frames(dir_or_glob);
  std::vector<Matrix> slices;
  slices.reserve(frames.size());
  for (const auto& f : frames) {
    const Tensor3 img = load_image(f);
    if (img.n3() != 1) throw FormatError("video frame " + f.string() + " is not a graymap", 0);
    if (!slices.empty() && (std::size_t(slices[0].rows()) != img.n1() || std::size_t(slices[0].cols()) != img.n2()))
      throw FormatError("video frame " + f.string() + " is " + std::to_string(img.n2()) + "x" +
                            std::to_string(img.n1()) + ", expected " + std::to_string(slices[0].cols()) + "x" +
                            std::to_string(slices[0].rows()),
                        0);
    slices.emplace_back(img.slice(0));
  }
  return from_slices(slices);
}

void save_video(const Tensor3& t, const fs::path& dir, const std::string& stem) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  for (std::size_t k = 0; k < t.n3(); ++k) {
    Tensor3 frame(t.n1(), t.n2(), 1);
    frame.slice(0) = t.slice(k);
    char name[32];
    std::snprintf(name, sizeof name, "_%04zu.pgm", k);
    save_image(frame, dir / (stem + name));
  }
}

} // namespace srtd

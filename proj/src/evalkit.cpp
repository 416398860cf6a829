#include "srtd/evalkit.hpp"

#include "srtd/errors.hpp"
#include "srtd/pnm.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <utility>

namespace srtd {

ObservationMask random_mask(const Dims& dims, double sr, std::uint64_t seed) {
  if (!(sr > 0.0 && sr <= 1.0)) throw ParameterError("random_mask: sampling rate must be in (0, 1], got " +
                                                     std::to_string(sr));
  const std::size_t total = dims.size();
  const auto wanted = std::size_t(std::llround(sr * double(total)));

  // Partial Fisher-Yates: the first `wanted` positions end up a uniform
  // sample without replacement.
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 gen(seed);
  for (std::size_t i = 0; i < wanted; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, total - 1);
    std::swap(order[i], order[pick(gen)]);
  }
  ObservationMask mask(dims, false);
  for (std::size_t i = 0; i < wanted; ++i) mask.set(order[i], true);
  return mask;
}

ObservationMask mask_from_image(const std::filesystem::path& path, std::size_t n3) {
  if (n3 == 0) throw ParameterError("mask_from_image: n3 must be positive");
  const PnmImage img = read_pnm(path);
  if (img.channels != 1) throw FormatError("mask file " + path.string() + " must be a graymap (P5)", 1);
  const Dims d{img.height, img.width, n3};
  ObservationMask mask(d, false);
  for (std::size_t r = 0; r < img.height; ++r)
    for (std::size_t c = 0; c < img.width; ++c) {
      const bool observed = img.pixels[r * img.width + c] == 0;
      for (std::size_t k = 0; k < n3; ++k) mask.set(r + d.n1 * (c + d.n2 * k), observed);
    }
  return mask;
}

Tensor3 apply_mask(const Tensor3& m, const ObservationMask& omega) {
  return project_observed(Tensor3(m.dims()), m, omega);
}

double psnr(const Tensor3& x_rec, const Tensor3& m, const ObservationMask& omega, PsnrMode mode) {
  require_same_dims(x_rec, m, "psnr");
  if (omega.dims() != m.dims()) throw DimensionError("psnr: mask dims differ from tensor dims");
  const auto x = x_rec.data();
  const auto ref = m.data();
  const auto total = double(x.size());

  double mse = 0.0;
  if (mode == PsnrMode::standard) {
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sq += (x[i] - ref[i]) * (x[i] - ref[i]);
    mse = sq / total;
  } else {
    const auto flags = omega.flags();
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!flags[i]) sq += (x[i] - ref[i]) * (x[i] - ref[i]);
    mse = std::sqrt(sq) / total;
  }
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

} // namespace srtd

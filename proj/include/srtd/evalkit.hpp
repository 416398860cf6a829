#pragma once

#include "srtd/mask.hpp"
#include "srtd/tensor3.hpp"

#include <cstdint>
#include <filesystem>

namespace srtd {

enum class PsnrMode {
  /// MSE = ||(x_rec - m) restricted to Ω^c||_F / T, T = n1 n2 n3 (norm not
  /// squared).
  paper,
  /// MSE = ||x_rec - m||_F^2 / T over all entries.
  standard,
};

/// Exactly round(sr * n1 n2 n3) observed entries, drawn uniformly without
/// replacement. Throws ParameterError unless 0 < sr <= 1.
ObservationMask random_mask(const Dims& dims, double sr, std::uint64_t seed);

/// Text-style mask from a graymap: nonzero pixels are missing, zero pixels
/// observed, replicated across n3 frontal slices.
ObservationMask mask_from_image(const std::filesystem::path& path, std::size_t n3);

/// m on Ω, zero elsewhere.
Tensor3 apply_mask(const Tensor3& m, const ObservationMask& omega);

/// 10 log10(255^2 / MSE). Returns +infinity when MSE is zero.
double psnr(const Tensor3& x_rec, const Tensor3& m, const ObservationMask& omega, PsnrMode mode);

} // namespace srtd

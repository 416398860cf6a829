#pragma once

#include "srtd/tensor3.hpp"

#include <complex>
#include <vector>

namespace srtd {

using Complex = std::complex<double>;

/// Complex third-order tensor holding a mode-3 spectrum. Same layout as
/// Tensor3, so frontal slices are contiguous complex matrices.
class SpectralTensor3 {
public:
  using SliceMap = Eigen::Map<ComplexMatrix>;
  using ConstSliceMap = Eigen::Map<const ComplexMatrix>;

  SpectralTensor3() = default;
  explicit SpectralTensor3(Dims dims) : dims_(dims), data_(dims.size(), Complex{}) {}

  const Dims& dims() const noexcept { return dims_; }
  std::size_t n1() const noexcept { return dims_.n1; }
  std::size_t n2() const noexcept { return dims_.n2; }
  std::size_t n3() const noexcept { return dims_.n3; }

  Complex operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return data_[i + dims_.n1 * (j + dims_.n2 * k)];
  }
  Complex& operator()(std::size_t i, std::size_t j, std::size_t k) noexcept {
    return data_[i + dims_.n1 * (j + dims_.n2 * k)];
  }

  ConstSliceMap slice(std::size_t k) const {
    return ConstSliceMap(data_.data() + k * dims_.slice_size(), Eigen::Index(dims_.n1), Eigen::Index(dims_.n2));
  }
  SliceMap slice(std::size_t k) {
    return SliceMap(data_.data() + k * dims_.slice_size(), Eigen::Index(dims_.n1), Eigen::Index(dims_.n2));
  }

  Eigen::Map<const ComplexMatrix> tubes() const {
    return {data_.data(), Eigen::Index(dims_.slice_size()), Eigen::Index(dims_.n3)};
  }
  Eigen::Map<ComplexMatrix> tubes() { return {data_.data(), Eigen::Index(dims_.slice_size()), Eigen::Index(dims_.n3)}; }

  /// Overwrite slices n3-k (k = 1 .. (n3-1)/2) with the conjugates of slices
  /// k, i.e. enforce the symmetry of a real tensor's spectrum exactly.
  void mirror_conjugate_half();

private:
  Dims dims_{};
  std::vector<Complex> data_;
};

/// Number of leading Fourier slices that determine a real tensor's spectrum.
inline std::size_t independent_slices(std::size_t n3) { return n3 / 2 + 1; }

/// Unnormalized DFT of every tube along mode 3.
SpectralTensor3 dft_mode3(const Tensor3& a);

/// Inverse of dft_mode3 (carries the 1/n3). Throws SpectralConsistencyError
/// if the result has an imaginary part above 1e-9 relative to its scale.
Tensor3 idft_mode3(const SpectralTensor3& s);

/// Orthonormal DCT-II matrix of size n (row k = k-th basis vector).
Matrix dct_matrix(std::size_t n);

/// Separable orthonormal DCT-II along modes 1, 2, 3.
Tensor3 dct3(const Tensor3& a);
/// Inverse (orthonormal DCT-III along the three modes).
Tensor3 idct3(const Tensor3& e);

} // namespace srtd

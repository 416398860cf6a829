#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace srtd {

using Matrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

struct Dims {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::size_t n3 = 0;

  std::size_t size() const noexcept { return n1 * n2 * n3; }
  std::size_t slice_size() const noexcept { return n1 * n2; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Dense real third-order tensor.
///
/// Storage is column-major with frontal slices contiguous: entry (i,j,k)
/// lives at i + n1*(j + n2*k). Frontal slice k is therefore an n1 x n2
/// column-major matrix and slice views are O(1) Eigen maps. Indices are
/// zero-based.
class Tensor3 {
public:
  using SliceMap = Eigen::Map<Matrix>;
  using ConstSliceMap = Eigen::Map<const Matrix>;

  Tensor3() = default;
  explicit Tensor3(Dims dims);
  Tensor3(std::size_t n1, std::size_t n2, std::size_t n3) : Tensor3(Dims{n1, n2, n3}) {}
  /// Takes ownership of `values` laid out as described above.
  Tensor3(Dims dims, std::vector<double> values);

  const Dims& dims() const noexcept { return dims_; }
  std::size_t n1() const noexcept { return dims_.n1; }
  std::size_t n2() const noexcept { return dims_.n2; }
  std::size_t n3() const noexcept { return dims_.n3; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return data_[i + dims_.n1 * (j + dims_.n2 * k)];
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) noexcept {
    return data_[i + dims_.n1 * (j + dims_.n2 * k)];
  }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  ConstSliceMap slice(std::size_t k) const {
    return ConstSliceMap(data_.data() + k * dims_.slice_size(), Eigen::Index(dims_.n1), Eigen::Index(dims_.n2));
  }
  SliceMap slice(std::size_t k) {
    return SliceMap(data_.data() + k * dims_.slice_size(), Eigen::Index(dims_.n1), Eigen::Index(dims_.n2));
  }

  /// The (n1*n2) x n3 matrix whose rows are tubes.
  Eigen::Map<const Matrix> tubes() const {
    return Eigen::Map<const Matrix>(data_.data(), Eigen::Index(dims_.slice_size()), Eigen::Index(dims_.n3));
  }
  Eigen::Map<Matrix> tubes() {
    return Eigen::Map<Matrix>(data_.data(), Eigen::Index(dims_.slice_size()), Eigen::Index(dims_.n3));
  }

  Tensor3& operator+=(const Tensor3& other);
  Tensor3& operator-=(const Tensor3& other);
  Tensor3& operator*=(double s);

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

private:
  Dims dims_{};
  std::vector<double> data_;
};

Tensor3 operator+(Tensor3 a, const Tensor3& b);
Tensor3 operator-(Tensor3 a, const Tensor3& b);
Tensor3 operator*(Tensor3 a, double s);
Tensor3 operator*(double s, Tensor3 a);

/// Tensor built from frontal slices, all of the same shape.
Tensor3 from_slices(std::span<const Matrix> slices);

/// Frontal slices stacked vertically: (n1*n3) x n2.
Matrix unfold(const Tensor3& a);
/// Inverse of unfold. Throws DimensionError unless m is (n1*n3) x n2.
Tensor3 fold(const Matrix& m, Dims dims);

/// Block-circulant matrix, (n1*n3) x (n2*n3). O(n3^2) memory; meant as a
/// reference for the t-product, not for production use.
Matrix bcirc(const Tensor3& a);

/// Slice-wise transpose with slices 2..n3 reversed.
Tensor3 ttranspose(const Tensor3& a);

Tensor3 identity_tensor(std::size_t n, std::size_t n3);

/// Lateral slices [first, first+count) as an n1 x count x n3 tensor.
Tensor3 lateral_slices(const Tensor3& a, std::size_t first, std::size_t count);

double fro_norm(const Tensor3& a);
double l1_norm(const Tensor3& a);
double max_abs(const Tensor3& a);
double inner_product(const Tensor3& a, const Tensor3& b);
/// Sum of the traces of all frontal slices; requires n1 == n2.
double ttrace(const Tensor3& a);

bool all_finite(const Tensor3& a);

void require_same_dims(const Tensor3& a, const Tensor3& b, const char* what);

} // namespace srtd

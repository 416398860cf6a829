#include "srtd/tensor3.hpp"

#include "parallel.hpp"
#include "srtd/errors.hpp"

#include <cmath>
#include <string>

namespace srtd {

namespace {

std::string dims_str(const Dims& d) {
  return std::to_string(d.n1) + "x" + std::to_string(d.n2) + "x" + std::to_string(d.n3);
}

} // namespace

void require_same_dims(const Tensor3& a, const Tensor3& b, const char* what) {
  if (a.dims() != b.dims())
    throw DimensionError(std::string(what) + ": dims " + dims_str(a.dims()) + " vs " + dims_str(b.dims()));
}

Tensor3::Tensor3(Dims dims) : dims_(dims), data_(dims.size(), 0.0) {}

Tensor3::Tensor3(Dims dims, std::vector<double> values) : dims_(dims), data_(std::move(values)) {
  if (data_.size() != dims_.size())
    throw DimensionError("Tensor3: " + std::to_string(data_.size()) + " values for dims " + dims_str(dims_));
}

Tensor3& Tensor3::operator+=(const Tensor3& other) {
  require_same_dims(*this, other, "operator+=");
  const auto n = std::int64_t(data_.size());
  double* x = data_.data();
  const double* y = other.data_.data();
#pragma omp parallel for if (n > detail::kElementwiseGrain)
  for (std::int64_t i = 0; i < n; ++i) x[i] += y[i];
  return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& other) {
  require_same_dims(*this, other, "operator-=");
  const auto n = std::int64_t(data_.size());
  double* x = data_.data();
  const double* y = other.data_.data();
#pragma omp parallel for if (n > detail::kElementwiseGrain)
  for (std::int64_t i = 0; i < n; ++i) x[i] -= y[i];
  return *this;
}

Tensor3& Tensor3::operator*=(double s) {
  const auto n = std::int64_t(data_.size());
  double* x = data_.data();
#pragma omp parallel for if (n > detail::kElementwiseGrain)
  for (std::int64_t i = 0; i < n; ++i) x[i] *= s;
  return *this;
}

Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
Tensor3 operator*(Tensor3 a, double s) { return a *= s; }
Tensor3 operator*(double s, Tensor3 a) { return a *= s; }

Tensor3 from_slices(std::span<const Matrix> slices) {
  if (slices.empty()) throw DimensionError("from_slices: no slices");
  const Dims d{std::size_t(slices[0].rows()), std::size_t(slices[0].cols()), slices.size()};
  Tensor3 t(d);
  for (std::size_t k = 0; k < d.n3; ++k) {
    if (std::size_t(slices[k].rows()) != d.n1 || std::size_t(slices[k].cols()) != d.n2)
      throw DimensionError("from_slices: slice " + std::to_string(k) + " has a different shape");
    t.slice(k) = slices[k];
  }
  return t;
}

Matrix unfold(const Tensor3& a) {
  const auto n1 = Eigen::Index(a.n1());
  Matrix m(n1 * Eigen::Index(a.n3()), Eigen::Index(a.n2()));
  for (std::size_t k = 0; k < a.n3(); ++k) m.middleRows(Eigen::Index(k) * n1, n1) = a.slice(k);
  return m;
}

Tensor3 fold(const Matrix& m, Dims dims) {
  if (std::size_t(m.rows()) != dims.n1 * dims.n3 || std::size_t(m.cols()) != dims.n2)
    throw DimensionError("fold: matrix " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                         " does not match dims " + dims_str(dims));
  Tensor3 t(dims);
  const auto n1 = Eigen::Index(dims.n1);
  for (std::size_t k = 0; k < dims.n3; ++k) t.slice(k) = m.middleRows(Eigen::Index(k) * n1, n1);
  return t;
}

Matrix bcirc(const Tensor3& a) {
  const auto n1 = Eigen::Index(a.n1()), n2 = Eigen::Index(a.n2());
  const std::size_t n3 = a.n3();
  Matrix m(n1 * Eigen::Index(n3), n2 * Eigen::Index(n3));
  // Block (row p, col q) holds slice (p - q) mod n3.
  for (std::size_t p = 0; p < n3; ++p)
    for (std::size_t q = 0; q < n3; ++q)
      m.block(Eigen::Index(p) * n1, Eigen::Index(q) * n2, n1, n2) = a.slice((p + n3 - q) % n3);
  return m;
}

Tensor3 ttranspose(const Tensor3& a) {
  const std::size_t n3 = a.n3();
  Tensor3 t(a.n2(), a.n1(), n3);
  for (std::size_t k = 0; k < n3; ++k) t.slice(k) = a.slice((n3 - k) % n3).transpose();
  return t;
}

Tensor3 identity_tensor(std::size_t n, std::size_t n3) {
  if (n == 0 || n3 == 0) throw ParameterError("identity_tensor: n and n3 must be positive");
  Tensor3 t(n, n, n3);
  t.slice(0).setIdentity();
  return t;
}

Tensor3 lateral_slices(const Tensor3& a, std::size_t first, std::size_t count) {
  if (first + count > a.n2())
    throw DimensionError("lateral_slices: range exceeds n2=" + std::to_string(a.n2()));
  Tensor3 t(a.n1(), count, a.n3());
  for (std::size_t k = 0; k < a.n3(); ++k)
    t.slice(k) = a.slice(k).middleCols(Eigen::Index(first), Eigen::Index(count));
  return t;
}

double fro_norm(const Tensor3& a) {
  const auto v = a.data();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), Eigen::Index(v.size())).norm();
}

double l1_norm(const Tensor3& a) {
  const auto v = a.data();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), Eigen::Index(v.size())).lpNorm<1>();
}

double max_abs(const Tensor3& a) {
  const auto v = a.data();
  if (v.empty()) return 0.0;
  return Eigen::Map<const Eigen::VectorXd>(v.data(), Eigen::Index(v.size())).lpNorm<Eigen::Infinity>();
}

double inner_product(const Tensor3& a, const Tensor3& b) {
  require_same_dims(a, b, "inner_product");
  const auto x = a.data(), y = b.data();
  return Eigen::Map<const Eigen::VectorXd>(x.data(), Eigen::Index(x.size()))
      .dot(Eigen::Map<const Eigen::VectorXd>(y.data(), Eigen::Index(y.size())));
}

double ttrace(const Tensor3& a) {
  if (a.n1() != a.n2())
    throw DimensionError("ttrace: frontal slices are " + std::to_string(a.n1()) + "x" + std::to_string(a.n2()));
  double tr = 0.0;
  for (std::size_t k = 0; k < a.n3(); ++k) tr += a.slice(k).trace();
  return tr;
}

bool all_finite(const Tensor3& a) {
  for (double v : a.data())
    if (!std::isfinite(v)) return false;
  return true;
}

} // namespace srtd

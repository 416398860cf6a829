#include "srtd/reference.hpp"

#include "srtd/errors.hpp"
#include "srtd/t_algebra.hpp"

#include <Eigen/SVD>

#include <array>
#include <cmath>
#include <numbers>

namespace srtd::reference {

namespace {

double dct_basis(std::size_t k, std::size_t i, std::size_t n) {
  const double s = k == 0 ? std::sqrt(1.0 / double(n)) : std::sqrt(2.0 / double(n));
  return s * std::cos(std::numbers::pi * double((2 * i + 1) * k) / double(2 * n));
}

// 1-D orthonormal DCT-II (or its inverse) along one mode.
Tensor3 dct_along(const Tensor3& a, int mode, bool inverse) {
  const Dims d = a.dims();
  const std::array<std::size_t, 3> n{d.n1, d.n2, d.n3};
  const std::size_t len = n[std::size_t(mode)];
  Tensor3 out(d);
  for (std::size_t i = 0; i < d.n1; ++i)
    for (std::size_t j = 0; j < d.n2; ++j)
      for (std::size_t k = 0; k < d.n3; ++k) {
        std::array<std::size_t, 3> idx{i, j, k};
        const std::size_t q = idx[std::size_t(mode)];
        double sum = 0.0;
        for (std::size_t p = 0; p < len; ++p) {
          idx[std::size_t(mode)] = p;
          const double basis = inverse ? dct_basis(p, q, len) : dct_basis(q, p, len);
          sum += basis * a(idx[0], idx[1], idx[2]);
        }
        out(i, j, k) = sum;
      }
  return out;
}

} // namespace

Tensor3 tproduct(const Tensor3& a, const Tensor3& b) {
  if (a.n2() != b.n1() || a.n3() != b.n3()) throw DimensionError("reference::tproduct: incompatible dims");
  return fold(bcirc(a) * unfold(b), Dims{a.n1(), b.n2(), a.n3()});
}

SpectralTensor3 dft_mode3(const Tensor3& a) {
  const Dims d = a.dims();
  SpectralTensor3 out(d);
  for (std::size_t i = 0; i < d.n1; ++i)
    for (std::size_t j = 0; j < d.n2; ++j)
      for (std::size_t k = 0; k < d.n3; ++k) {
        Complex sum{};
        for (std::size_t t = 0; t < d.n3; ++t)
          sum += a(i, j, t) * std::polar(1.0, -2.0 * std::numbers::pi * double(k * t) / double(d.n3));
        out(i, j, k) = sum;
      }
  return out;
}

Tensor3 idft_mode3(const SpectralTensor3& s) {
  const Dims d = s.dims();
  Tensor3 out(d);
  for (std::size_t i = 0; i < d.n1; ++i)
    for (std::size_t j = 0; j < d.n2; ++j)
      for (std::size_t t = 0; t < d.n3; ++t) {
        Complex sum{};
        for (std::size_t k = 0; k < d.n3; ++k)
          sum += s(i, j, k) * std::polar(1.0, 2.0 * std::numbers::pi * double(k * t) / double(d.n3));
        out(i, j, t) = sum.real() / double(d.n3);
      }
  return out;
}

Tensor3 dct3(const Tensor3& a) { return dct_along(dct_along(dct_along(a, 0, false), 1, false), 2, false); }

Tensor3 idct3(const Tensor3& e) { return dct_along(dct_along(dct_along(e, 2, true), 1, true), 0, true); }

Tensor3 svt(const Tensor3& x, double tau) {
  const Matrix shrunk = srtd::svt(bcirc(x), tau);
  return fold(shrunk.leftCols(Eigen::Index(x.n2())), x.dims());
}

double bcirc_nuclear_norm(const Tensor3& a) {
  const Matrix m = bcirc(a);
  if (m.size() == 0) return 0.0;
  return Eigen::BDCSVD<Matrix>(m).singularValues().sum();
}

} // namespace srtd::reference

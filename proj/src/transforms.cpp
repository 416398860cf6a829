#include "srtd/transforms.hpp"

#include "parallel.hpp"
#include "srtd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace srtd {

namespace {

// Rows of the tube matrix handled per task in the mode-3 kernels.
constexpr Eigen::Index kRowChunk = 2048;

Eigen::Index row_chunks(Eigen::Index rows) { return (rows + kRowChunk - 1) / kRowChunk; }

// cos/sin(2*pi*k*t/n) for k in [0, cols), t in [0, n). The product is reduced
// mod n first so that symmetric entries come out identical.
void twiddles(std::size_t n, std::size_t cols, Matrix& c, Matrix& s) {
  c.resize(Eigen::Index(n), Eigen::Index(cols));
  s.resize(Eigen::Index(n), Eigen::Index(cols));
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t k = 0; k < cols; ++k) {
      const double angle = 2.0 * std::numbers::pi * double((k * t) % n) / double(n);
      c(Eigen::Index(t), Eigen::Index(k)) = std::cos(angle);
      s(Eigen::Index(t), Eigen::Index(k)) = std::sin(angle);
    }
}

// out = in * m, chunked over rows (in and out are (n1*n2) x n3 tube matrices).
void tube_gemm(Eigen::Map<const Matrix> in, const Matrix& m, Eigen::Map<Matrix> out) {
  const Eigen::Index rows = in.rows();
  const Eigen::Index chunks = row_chunks(rows);
#pragma omp parallel for schedule(static) if (chunks > 1)
  for (Eigen::Index c = 0; c < chunks; ++c) {
    const Eigen::Index r0 = c * kRowChunk;
    const Eigen::Index len = std::min(kRowChunk, rows - r0);
    out.middleRows(r0, len).noalias() = in.middleRows(r0, len) * m;
  }
}

Tensor3 dct_apply(const Tensor3& a, bool inverse) {
  const Dims d = a.dims();
  Tensor3 cur = a;
  Tensor3 next(d);
  const auto n3 = std::int64_t(d.n3);

  if (d.n1 > 1) {
    const Matrix c1 = dct_matrix(d.n1);
#pragma omp parallel for schedule(static) if (n3 > 1)
    for (std::int64_t k = 0; k < n3; ++k) {
      if (inverse)
        next.slice(std::size_t(k)).noalias() = c1.transpose() * cur.slice(std::size_t(k));
      else
        next.slice(std::size_t(k)).noalias() = c1 * cur.slice(std::size_t(k));
    }
    std::swap(cur, next);
  }
  if (d.n2 > 1) {
    const Matrix c2 = dct_matrix(d.n2);
#pragma omp parallel for schedule(static) if (n3 > 1)
    for (std::int64_t k = 0; k < n3; ++k) {
      if (inverse)
        next.slice(std::size_t(k)).noalias() = cur.slice(std::size_t(k)) * c2;
      else
        next.slice(std::size_t(k)).noalias() = cur.slice(std::size_t(k)) * c2.transpose();
    }
    std::swap(cur, next);
  }
  if (d.n3 > 1) {
    const Matrix c3 = dct_matrix(d.n3);
    const Tensor3& src = cur;
    if (inverse)
      tube_gemm(src.tubes(), c3, next.tubes());
    else
      tube_gemm(src.tubes(), c3.transpose(), next.tubes());
    std::swap(cur, next);
  }
  return cur;
}

} // namespace

void SpectralTensor3::mirror_conjugate_half() {
  const std::size_t n3 = dims_.n3;
  for (std::size_t k = 1; k < independent_slices(n3); ++k) {
    const std::size_t mirror = n3 - k;
    if (mirror == k) continue;
    slice(mirror) = slice(k).conjugate();
  }
}

SpectralTensor3 dft_mode3(const Tensor3& a) {
  const Dims d = a.dims();
  const std::size_t half = independent_slices(d.n3);
  SpectralTensor3 out(d);

  Matrix c, s;
  twiddles(d.n3, half, c, s);

  const auto in = a.tubes();
  auto spec = out.tubes();
  const Eigen::Index rows = in.rows();
  const Eigen::Index chunks = row_chunks(rows);
  const auto h = Eigen::Index(half);
#pragma omp parallel for schedule(static) if (chunks > 1)
  for (Eigen::Index ch = 0; ch < chunks; ++ch) {
    const Eigen::Index r0 = ch * kRowChunk;
    const Eigen::Index len = std::min(kRowChunk, rows - r0);
    const Matrix re = in.middleRows(r0, len) * c;
    const Matrix im = -(in.middleRows(r0, len) * s);
    spec.block(r0, 0, len, h).real() = re;
    spec.block(r0, 0, len, h).imag() = im;
  }
  out.mirror_conjugate_half();
  return out;
}

Tensor3 idft_mode3(const SpectralTensor3& s) {
  const Dims d = s.dims();
  Tensor3 out(d);

  Matrix c, sn;
  twiddles(d.n3, d.n3, c, sn);
  const double scale = 1.0 / double(d.n3);

  const auto spec = s.tubes();
  auto real = out.tubes();
  const Eigen::Index rows = spec.rows();
  const Eigen::Index chunks = row_chunks(rows);
  double max_imag = 0.0;
  double max_real = 0.0;
#pragma omp parallel for schedule(static) reduction(max : max_imag, max_real) if (chunks > 1)
  for (Eigen::Index ch = 0; ch < chunks; ++ch) {
    const Eigen::Index r0 = ch * kRowChunk;
    const Eigen::Index len = std::min(kRowChunk, rows - r0);
    const Matrix sr = spec.middleRows(r0, len).real();
    const Matrix si = spec.middleRows(r0, len).imag();
    real.middleRows(r0, len).noalias() = scale * (sr * c - si * sn);
    const Matrix im = scale * (sr * sn + si * c);
    if (im.size() > 0) max_imag = std::max(max_imag, im.cwiseAbs().maxCoeff());
    if (len > 0) max_real = std::max(max_real, real.middleRows(r0, len).cwiseAbs().maxCoeff());
  }
  if (max_imag > 1e-9 * std::max(1.0, max_real))
    throw SpectralConsistencyError("idft_mode3: imaginary residue " + std::to_string(max_imag) +
                                   " exceeds tolerance; input is not the spectrum of a real tensor");
  return out;
}

Matrix dct_matrix(std::size_t n) {
  Matrix c{Eigen::Index(n), Eigen::Index(n)};
  const double s0 = std::sqrt(1.0 / double(n));
  const double sk = std::sqrt(2.0 / double(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      c(Eigen::Index(k), Eigen::Index(i)) =
          (k == 0 ? s0 : sk) * std::cos(std::numbers::pi * double((2 * i + 1) * k) / double(2 * n));
  return c;
}

Tensor3 dct3(const Tensor3& a) { return dct_apply(a, false); }

Tensor3 idct3(const Tensor3& e) { return dct_apply(e, true); }

} // namespace srtd

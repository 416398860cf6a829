#include "srtd/t_algebra.hpp"

#include "parallel.hpp"
#include "srtd/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

namespace srtd {

namespace {

struct SliceSvd {
  ComplexMatrix u;
  Eigen::VectorXd sigma;
  ComplexMatrix v;
};

// The DC slice (and the Nyquist slice for even n3) of a real tensor's
// spectrum is real. Those must get a real SVD: complex singular vectors with
// arbitrary phases there would leave an imaginary part after the inverse DFT.
bool is_real_slice(std::size_t k, std::size_t n3) { return k == 0 || 2 * k == n3; }

SliceSvd slice_svd(const Eigen::Map<const ComplexMatrix>& m, bool real_slice, unsigned options) {
  SliceSvd out;
  if (real_slice) {
    const Matrix mr = m.real();
    Eigen::BDCSVD<Matrix> svd(mr, options);
    out.sigma = svd.singularValues();
    if (options & (Eigen::ComputeFullU | Eigen::ComputeThinU)) out.u = svd.matrixU().cast<Complex>();
    if (options & (Eigen::ComputeFullV | Eigen::ComputeThinV)) out.v = svd.matrixV().cast<Complex>();
  } else {
    Eigen::BDCSVD<ComplexMatrix> svd(m, options);
    out.sigma = svd.singularValues();
    if (options & (Eigen::ComputeFullU | Eigen::ComputeThinU)) out.u = svd.matrixU();
    if (options & (Eigen::ComputeFullV | Eigen::ComputeThinV)) out.v = svd.matrixV();
  }
  return out;
}

Eigen::VectorXd singular_values(const Matrix& m) {
  if (m.size() == 0) return {};
  return Eigen::BDCSVD<Matrix>(m).singularValues();
}

// Sum of frontal slices, i.e. the first Fourier slice of an unnormalized DFT.
Matrix first_fourier_slice(const Tensor3& a) {
  Matrix sum = Matrix::Zero(Eigen::Index(a.n1()), Eigen::Index(a.n2()));
  for (std::size_t k = 0; k < a.n3(); ++k) sum += a.slice(k);
  return sum;
}

} // namespace

Tensor3 tproduct(const Tensor3& a, const Tensor3& b) {
  if (a.n2() != b.n1() || a.n3() != b.n3())
    throw DimensionError("tproduct: " + std::to_string(a.n1()) + "x" + std::to_string(a.n2()) + "x" +
                         std::to_string(a.n3()) + " * " + std::to_string(b.n1()) + "x" + std::to_string(b.n2()) +
                         "x" + std::to_string(b.n3()));
  const SpectralTensor3 fa = dft_mode3(a);
  const SpectralTensor3 fb = dft_mode3(b);
  SpectralTensor3 fc(Dims{a.n1(), b.n2(), a.n3()});
  const auto half = std::int64_t(independent_slices(a.n3()));
#pragma omp parallel for schedule(static) if (half > 1)
  for (std::int64_t k = 0; k < half; ++k)
    fc.slice(std::size_t(k)).noalias() = fa.slice(std::size_t(k)) * fb.slice(std::size_t(k));
  fc.mirror_conjugate_half();
  return idft_mode3(fc);
}

TSvdFactors tsvd(const Tensor3& a, TsvdShape shape) {
  const Dims d = a.dims();
  const std::size_t m = std::min(d.n1, d.n2);
  const bool full = shape == TsvdShape::full;
  const unsigned options =
      full ? (Eigen::ComputeFullU | Eigen::ComputeFullV) : (Eigen::ComputeThinU | Eigen::ComputeThinV);

  const SpectralTensor3 fa = dft_mode3(a);
  SpectralTensor3 fu(Dims{d.n1, full ? d.n1 : m, d.n3});
  SpectralTensor3 fs(full ? d : Dims{m, m, d.n3});
  SpectralTensor3 fv(Dims{d.n2, full ? d.n2 : m, d.n3});

  const auto half = std::int64_t(independent_slices(d.n3));
#pragma omp parallel for schedule(dynamic) if (half > 1)
  for (std::int64_t kk = 0; kk < half; ++kk) {
    const auto k = std::size_t(kk);
    SliceSvd svd = slice_svd(fa.slice(k), is_real_slice(k, d.n3), options);
    fu.slice(k) = svd.u;
    fv.slice(k) = svd.v;
    auto s = fs.slice(k);
    for (std::size_t j = 0; j < m; ++j) s(Eigen::Index(j), Eigen::Index(j)) = svd.sigma(Eigen::Index(j));
  }
  fu.mirror_conjugate_half();
  fs.mirror_conjugate_half();
  fv.mirror_conjugate_half();
  return {idft_mode3(fu), idft_mode3(fs), idft_mode3(fv)};
}

std::vector<Eigen::VectorXd> spectral_singular_values(const Tensor3& a) {
  const std::size_t n3 = a.n3();
  const SpectralTensor3 fa = dft_mode3(a);
  std::vector<Eigen::VectorXd> out(n3);
  const auto half = std::int64_t(independent_slices(n3));
#pragma omp parallel for schedule(dynamic) if (half > 1)
  for (std::int64_t kk = 0; kk < half; ++kk) {
    const auto k = std::size_t(kk);
    out[k] = slice_svd(fa.slice(k), is_real_slice(k, n3), 0).sigma;
  }
  for (std::size_t k = std::size_t(half); k < n3; ++k) out[k] = out[n3 - k];
  return out;
}

std::size_t tubal_rank(const Tensor3& a, double tol) {
  if (tol < 0.0) throw ParameterError("tubal_rank: tol must be non-negative");
  const auto sigmas = spectral_singular_values(a);
  double largest = 0.0;
  for (const auto& s : sigmas)
    if (s.size() > 0) largest = std::max(largest, s.maxCoeff());
  const double cut = tol * largest;
  std::size_t rank = 0;
  for (const auto& s : sigmas) rank = std::max(rank, std::size_t((s.array() > cut).count()));
  return rank;
}

double tnn(const Tensor3& a) { return singular_values(first_fourier_slice(a)).sum(); }

double tnn_from_tsvd(const Tensor3& a) {
  const TSvdFactors f = tsvd(a, TsvdShape::economy);
  return ttrace(f.s);
}

double tnn_spectral_mean(const Tensor3& a) {
  double total = 0.0;
  for (const auto& s : spectral_singular_values(a)) total += s.sum();
  return total / double(a.n3());
}

double trace_pair(const Tensor3& a, const Tensor3& b) {
  if (a.n2() != b.n1() || a.n3() != b.n3() || a.n1() != b.n2())
    throw DimensionError("trace_pair: operands do not form a square t-product");
  const Matrix fa = first_fourier_slice(a);
  const Matrix fb = first_fourier_slice(b);
  return fa.cwiseProduct(fb.transpose()).sum();
}

double ttnn(const Tensor3& a, std::size_t r) {
  const std::size_t m = std::min(a.n1(), a.n2());
  if (r > m) throw ParameterError("ttnn: r=" + std::to_string(r) + " exceeds min(n1,n2)=" + std::to_string(m));
  const Eigen::VectorXd s = singular_values(first_fourier_slice(a));
  return s.tail(Eigen::Index(m - r)).sum();
}

Tensor3 svt(const Tensor3& x, double tau) {
  if (tau < 0.0) throw ParameterError("svt: tau must be non-negative");
  const Dims d = x.dims();
  const SpectralTensor3 fx = dft_mode3(x);
  SpectralTensor3 fy(d);
  const auto half = std::int64_t(independent_slices(d.n3));
#pragma omp parallel for schedule(dynamic) if (half > 1)
  for (std::int64_t kk = 0; kk < half; ++kk) {
    const auto k = std::size_t(kk);
    const SliceSvd svd = slice_svd(fx.slice(k), is_real_slice(k, d.n3), Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd shrunk = (svd.sigma.array() - tau).max(0.0);
    const auto keep = Eigen::Index((shrunk.array() > 0.0).count());
    if (keep == 0) {
      fy.slice(k).setZero();
      continue;
    }
    fy.slice(k).noalias() = svd.u.leftCols(keep) * shrunk.head(keep).cast<Complex>().asDiagonal() *
                            svd.v.leftCols(keep).adjoint();
  }
  fy.mirror_conjugate_half();
  return idft_mode3(fy);
}

Matrix svt(const Matrix& x, double tau) {
  if (tau < 0.0) throw ParameterError("svt: tau must be non-negative");
  if (x.size() == 0) return x;
  Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd shrunk = (svd.singularValues().array() - tau).max(0.0);
  return svd.matrixU() * shrunk.asDiagonal() * svd.matrixV().transpose();
}

bool trace_bound_check(const Matrix& x, const Matrix& a, const Matrix& b) {
  const Eigen::Index r = a.rows();
  if (b.rows() != r || a.cols() != x.rows() || b.cols() != x.cols())
    throw DimensionError("trace_bound_check: a must be r x m and b r x n for an m x n x");
  if (r > std::min(x.rows(), x.cols())) throw ParameterError("trace_bound_check: r exceeds min(m, n)");
  if (r == 0) return true;
  const Matrix ir = Matrix::Identity(r, r);
  if ((a * a.transpose() - ir).cwiseAbs().maxCoeff() > 1e-9)
    throw ParameterError("trace_bound_check: rows of a are not orthonormal");
  if ((b * b.transpose() - ir).cwiseAbs().maxCoeff() > 1e-9)
    throw ParameterError("trace_bound_check: rows of b are not orthonormal");
  const double lhs = (a * x * b.transpose()).trace();
  return lhs <= singular_values(x).head(r).sum() + 1e-8;
}

} // namespace srtd

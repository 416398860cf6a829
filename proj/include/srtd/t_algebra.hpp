#pragma once

#include "srtd/tensor3.hpp"
#include "srtd/transforms.hpp"

#include <cstddef>
#include <vector>

namespace srtd {

/// u * s * ttranspose(v) factorization. Full factors have u: n1 x n1 x n3,
/// s: n1 x n2 x n3, v: n2 x n2 x n3; economy factors keep m = min(n1, n2)
/// lateral slices (u: n1 x m, s: m x m, v: n2 x m).
struct TSvdFactors {
  Tensor3 u;
  Tensor3 s;
  Tensor3 v;
};

enum class TsvdShape { full, economy };

/// t-product a * b, computed slice-wise in the Fourier domain.
/// a: n1 x n2 x n3, b: n2 x n4 x n3. Throws DimensionError otherwise.
Tensor3 tproduct(const Tensor3& a, const Tensor3& b);

/// T-SVD via one SVD per independent Fourier slice. Spectral singular values
/// are non-increasing within each slice; singular-vector phases are whatever
/// the SVD returns.
TSvdFactors tsvd(const Tensor3& a, TsvdShape shape = TsvdShape::full);

/// Singular values of each Fourier slice Ā⁽ᵏ⁾, k = 0 .. n3-1, descending.
std::vector<Eigen::VectorXd> spectral_singular_values(const Tensor3& a);

/// Largest per-slice count of spectral singular values above
/// tol * (largest singular value over all slices).
std::size_t tubal_rank(const Tensor3& a, double tol = 1e-8);

/// Tensor nuclear norm tr(S) as the nuclear norm of the first Fourier slice
/// (the plain sum of frontal slices). One matrix SVD.
double tnn(const Tensor3& a);

/// tr(S) summed over the frontal slices of the T-SVD core. Slow path, kept
/// as a cross-check of tnn().
double tnn_from_tsvd(const Tensor3& a);

/// (1/n3) * sum_k ||Ā⁽ᵏ⁾||_*, which equals ||bcirc(a)||_* / n3. svt(x, tau)
/// minimizes tau * tnn_spectral_mean(.) + 1/2 ||. - x||_F^2.
double tnn_spectral_mean(const Tensor3& a);

/// tr(a * b) from the first Fourier slices: Re tr(Ā⁽¹⁾ B̄⁽¹⁾).
double trace_pair(const Tensor3& a, const Tensor3& b);

/// Truncated nuclear norm: sum of sigma_j(Ā⁽¹⁾) for j > r.
/// Throws ParameterError unless 0 <= r <= min(n1, n2).
double ttnn(const Tensor3& a, std::size_t r);

/// Tensor singular value thresholding: every Fourier-domain singular value
/// shrunk to max(sigma - tau, 0).
Tensor3 svt(const Tensor3& x, double tau);

/// Matrix singular value thresholding.
Matrix svt(const Matrix& x, double tau);

/// Checks tr(a x b^T) <= sum_{i<=r} sigma_i(x) + 1e-8 where a (r x m) and
/// b (r x n) have orthonormal rows. Throws ParameterError if they do not
/// (to 1e-9).
bool trace_bound_check(const Matrix& x, const Matrix& a, const Matrix& b);

} // namespace srtd

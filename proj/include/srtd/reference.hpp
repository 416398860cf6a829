#pragma once

// Serial, definition-level implementations of the tensor kernels. They are
// slow (bcirc-based or direct summation) and exist to check and benchmark
// the parallel kernels; nothing in the solver calls them.

#include "srtd/tensor3.hpp"
#include "srtd/transforms.hpp"

namespace srtd::reference {

/// fold(bcirc(a) * unfold(b)).
Tensor3 tproduct(const Tensor3& a, const Tensor3& b);

/// Direct O(n3^2) DFT of each tube.
SpectralTensor3 dft_mode3(const Tensor3& a);
/// Direct inverse DFT; returns the real part and discards the imaginary one.
Tensor3 idft_mode3(const SpectralTensor3& s);

/// Direct cosine sums along each mode, cosines evaluated inline.
Tensor3 dct3(const Tensor3& a);
Tensor3 idct3(const Tensor3& e);

/// Matrix SVT of bcirc(x), folded back from its first block column.
Tensor3 svt(const Tensor3& x, double tau);

/// Nuclear norm of bcirc(a).
double bcirc_nuclear_norm(const Tensor3& a);

} // namespace srtd::reference

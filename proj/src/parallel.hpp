#pragma once

#include <cstddef>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace srtd::detail {

// Elementwise loops below this many entries stay serial; thread start-up
// costs more than the work.
inline constexpr std::int64_t kElementwiseGrain = 1 << 15;

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

} // namespace srtd::detail

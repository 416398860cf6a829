#include "srtd/mask.hpp"

#include "srtd/errors.hpp"

#include <numeric>

namespace srtd {

ObservationMask::ObservationMask(Dims dims, std::vector<std::uint8_t> observed)
    : dims_(dims), observed_(std::move(observed)) {
  if (observed_.size() != dims_.size()) throw DimensionError("ObservationMask: flag count does not match dims");
  for (auto& f : observed_) f = f ? 1 : 0;
}

std::size_t ObservationMask::count() const noexcept {
  return std::accumulate(observed_.begin(), observed_.end(), std::size_t{0});
}

double ObservationMask::sampling_rate() const noexcept {
  return observed_.empty() ? 0.0 : double(count()) / double(observed_.size());
}

Tensor3 project_observed(const Tensor3& x, const Tensor3& m, const ObservationMask& omega) {
  require_same_dims(x, m, "project_observed");
  if (omega.dims() != x.dims()) throw DimensionError("project_observed: mask dims differ from tensor dims");
  Tensor3 out = x;
  auto o = out.data();
  const auto src = m.data();
  const auto flags = omega.flags();
  for (std::size_t i = 0; i < o.size(); ++i)
    if (flags[i]) o[i] = src[i];
  return out;
}

} // namespace srtd

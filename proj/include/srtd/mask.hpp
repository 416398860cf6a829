#pragma once

#include "srtd/tensor3.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace srtd {

/// The observed index set Ω of a third-order tensor. Same linear layout as
/// Tensor3; true means observed.
class ObservationMask {
public:
  ObservationMask() = default;
  /// All entries set to `observed`.
  explicit ObservationMask(Dims dims, bool observed = false)
      : dims_(dims), observed_(dims.size(), observed ? 1 : 0) {}
  ObservationMask(Dims dims, std::vector<std::uint8_t> observed);

  const Dims& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return observed_.size(); }

  bool observed(std::size_t linear) const noexcept { return observed_[linear] != 0; }
  bool observed(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return observed_[i + dims_.n1 * (j + dims_.n2 * k)] != 0;
  }
  void set(std::size_t linear, bool value) noexcept { observed_[linear] = value ? 1 : 0; }

  std::span<const std::uint8_t> flags() const noexcept { return observed_; }

  std::size_t count() const noexcept;
  /// |Ω| / (n1 n2 n3).
  double sampling_rate() const noexcept;

  friend bool operator==(const ObservationMask&, const ObservationMask&) = default;

private:
  Dims dims_{};
  std::vector<std::uint8_t> observed_;
};

/// x on the complement of Ω, m on Ω. Values on Ω are copied, not recomputed,
/// so the result equals m there bit for bit.
Tensor3 project_observed(const Tensor3& x, const Tensor3& m, const ObservationMask& omega);

} // namespace srtd

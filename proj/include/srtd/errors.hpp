#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace srtd {

// Shapes of the operands are incompatible.
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A scalar/integer parameter is outside its admissible range.
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// An inverse DFT produced a non-negligible imaginary part, i.e. the input
// was not the spectrum of a real tensor.
class SpectralConsistencyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed media or mask file.
class FormatError : public std::runtime_error {
public:
  FormatError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}

  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_ = 0;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A solver iterate became non-finite.
class DivergenceError : public std::runtime_error {
public:
  DivergenceError(const std::string& what, int iteration)
      : std::runtime_error(what + " at iteration " + std::to_string(iteration)), iteration_(iteration) {}

  int iteration() const noexcept { return iteration_; }

private:
  int iteration_;
};

} // namespace srtd

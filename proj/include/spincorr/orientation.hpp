#pragma once

#include <cstdint>
#include <stdexcept>

namespace spincorr {

// Handedness of the 3-sphere, the per-trial hidden variable. Only +1 and -1
// exist; sampled as a fair coin.
struct Orientation {
  std::int8_t value = +1;

  static Orientation plus() { return {+1}; }
  static Orientation minus() { return {-1}; }

  static Orientation from_sign(int s) {
    if (s != +1 && s != -1) {
      throw std::invalid_argument("Orientation: sign must be +1 or -1");
    }
    return {static_cast<std::int8_t>(s)};
  }

  double scalar() const { return static_cast<double>(value); }
  Orientation flipped() const { return {static_cast<std::int8_t>(-value)}; }

  bool operator==(const Orientation&) const = default;
};

}  // namespace spincorr

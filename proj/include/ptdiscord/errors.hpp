#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace ptdiscord {

/// A propagated quantity left the representable/guarded range.
class OverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested a stationary covariance for a non-Hurwitz drift matrix.
/// Carries the real parts of the drift spectrum so callers can report why.
class NoStationarySolution : public std::runtime_error {
 public:
  NoStationarySolution(const std::string& what, const std::array<double, 4>& re)
      : std::runtime_error(what), spectrum_real_parts(re) {}
  std::array<double, 4> spectrum_real_parts{};
};

}  // namespace ptdiscord

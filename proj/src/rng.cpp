#include "skor/rng.hpp"

#include <cmath>
#include <numbers>

namespace skor {

double RngStream::next_normal() {
  // Box-Muller, cosine branch only: exactly two raw draws per call, no
  // cached second variate, so the draw count stays a pure function of the
  // call count.
  const double u1 = next_unit_open();
  const double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace skor

#include "bayup/rng.hpp"

#include <cmath>

namespace bayup {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 bounded away from 0 so the log is finite
  double u1 = uniform();
  if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 6.28318530717958647692 * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace bayup

#include "v2n/agents/dod.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace v2n::agents {

void DodConfig::validate() const {
  if (!(lower < upper)) throw std::invalid_argument("DOD range needs lower < upper");
  if (n_max < 1) throw std::invalid_argument("DOD n_max must be >= 1");
}

double dod_affine(double raw, const DodConfig& c) {
  const double width = c.upper - c.lower;
  return raw * (2.0 * c.n_max) / width - c.n_max * (c.upper + c.lower) / width;
}

int dod(double raw, const DodConfig& c) {
  const double y = dod_affine(std::clamp(raw, c.lower, c.upper), c);
  // ceil(y - 1/2) is the nearest integer with ties resolved downwards.
  const int a = static_cast<int>(std::ceil(y - 0.5));
  return std::clamp(a, -c.n_max, c.n_max);
}

double dod_preimage_centre(int action, const DodConfig& c) {
  return c.lower + (action + c.n_max) * (c.upper - c.lower) / (2.0 * c.n_max);
}

}  // namespace v2n::agents

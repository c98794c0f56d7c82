#include "nyfr/types.hpp"

#include <cmath>

namespace nyfr {

GridSpec make_grid(std::int64_t n_samples, double sample_rate_hz) {
  require(n_samples > 0, "GridSpec: n_samples must be positive");
  require(std::isfinite(sample_rate_hz) && sample_rate_hz > 0.0,
          "GridSpec: sample_rate_hz must be positive and finite");
  return GridSpec{n_samples, sample_rate_hz};
}

bool nearly_equal(double a, double b, double rel_tol) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= rel_tol * std::max(scale, 1e-300);
}

}  // namespace nyfr

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nyfr {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Throws std::invalid_argument on violated preconditions.  All validation in
// the library funnels through here so error texts stay uniform.
inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Uniform sampling grid: n_samples points spaced 1/sample_rate_hz apart,
// starting at t = 0.  duration is derived, never stored, so the three
// quantities cannot drift apart.
struct GridSpec {
  std::int64_t n_samples = 0;
  double sample_rate_hz = 0.0;

  double dt_s() const { return 1.0 / sample_rate_hz; }
  double duration_s() const { return static_cast<double>(n_samples) / sample_rate_hz; }
  // Frequency spacing of the length-n DFT of one record.
  double bin_hz() const { return sample_rate_hz / static_cast<double>(n_samples); }
  double time_of(std::int64_t i) const { return static_cast<double>(i) / sample_rate_hz; }

  bool operator==(const GridSpec&) const = default;
};

GridSpec make_grid(std::int64_t n_samples, double sample_rate_hz);

// Relative comparison helper used by validators ("equal within float noise").
bool nearly_equal(double a, double b, double rel_tol = 1e-9);

}  // namespace nyfr

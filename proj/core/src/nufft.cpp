#include <algorithm>
#include <cmath>

#include "nyfr/kernels.hpp"

namespace nyfr {

namespace {

// Gaussian-kernel gridding (type-1 transform): spread the scattered samples
// onto an oversampled uniform grid with a truncated Gaussian, FFT, then divide
// out the kernel transform.  With oversampling Ng >= 2*Nm and half-width Msp,
// the truncation and aliasing errors balance at
//     tau = Msp * dx / (2 * sqrt(Ng * (Ng - Nm)))        (dx = 2 pi / Ng)
// giving a relative error of about exp(-pi * Msp / sqrt(2)) at Ng = 2*Nm,
// i.e. roughly one decimal digit per unit of Msp.

int kernel_half_width(double tolerance) {
  require(tolerance > 0.0 && tolerance < 1.0, "nufft: tolerance must be in (0,1)");
  // Solve exp(-2.221 * Msp) <= tolerance / 10 (one extra digit of margin).
  return static_cast<int>(std::ceil(std::log(10.0 / tolerance) / 2.221));
}

CVec nufft_direct(const CVec& y, const std::vector<double>& t,
                  const FreqGrid& grid) {
  CVec out(static_cast<std::size_t>(grid.count));
  for (std::int64_t i = 0; i < grid.count; ++i) {
    const double f = grid.freq_of(i);
    cplx acc{0.0, 0.0};
    for (std::size_t m = 0; m < y.size(); ++m) {
      const double phase = -kTwoPi * f * t[m];
      acc += y[m] * cplx{std::cos(phase), std::sin(phase)};
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

CVec nufft_fast(const CVec& y, const std::vector<double>& t,
                const FreqGrid& grid, std::int64_t k0, int msp) {
  const std::int64_t nm = grid.count;
  const std::int64_t ng = next_fast_size(std::max<std::int64_t>(2 * nm, 4 * msp + 4));
  const double dx = kTwoPi / static_cast<double>(ng);
  const double tau = static_cast<double>(msp) * dx /
                     (2.0 * std::sqrt(static_cast<double>(ng) * static_cast<double>(ng - nm)));
  // Requested modes are k0 .. k0+nm-1; re-centre them around zero so the
  // deconvolution factor exp(tau k'^2) stays small.
  const std::int64_t kc = k0 + nm / 2;

  CVec gridded(static_cast<std::size_t>(ng), cplx{0.0, 0.0});
  for (std::size_t m = 0; m < y.size(); ++m) {
    // Map the instant onto the periodic axis [0, 2 pi).
    double x = kTwoPi * grid.step_hz * t[m];
    x -= kTwoPi * std::floor(x / kTwoPi);
    if (x >= kTwoPi) x -= kTwoPi;
    // Pre-phase shifts the mode window: e^{-j(k'+kc)x} = e^{-j kc x} e^{-j k' x}.
    const double pre = -static_cast<double>(kc) * x;
    const cplx c = y[m] * cplx{std::cos(pre), std::sin(pre)};
    const auto i0 = static_cast<std::int64_t>(std::llround(x / dx));
    for (std::int64_t di = -msp; di <= msp; ++di) {
      const std::int64_t i = i0 + di;
      const double u = x - static_cast<double>(i) * dx;
      const double w = std::exp(-u * u / (4.0 * tau));
      const std::int64_t iw = ((i % ng) + ng) % ng;
      gridded[static_cast<std::size_t>(iw)] += c * w;
    }
  }

  const CVec spec = fft(gridded);
  CVec out(static_cast<std::size_t>(nm));
  const double norm = dx / (2.0 * std::sqrt(kPi * tau));
  for (std::int64_t i = 0; i < nm; ++i) {
    const std::int64_t kp = k0 + i - kc;  // in [-nm/2, nm/2]
    const std::int64_t idx = ((kp % ng) + ng) % ng;
    const double kd = static_cast<double>(kp);
    out[static_cast<std::size_t>(i)] =
        spec[static_cast<std::size_t>(idx)] * (norm * std::exp(tau * kd * kd));
  }
  return out;
}

}  // namespace

CVec nufft_time_to_freq(const CVec& y, const std::vector<double>& instants_s,
                        const FreqGrid& grid, const NufftOptions& opts) {
  require(!y.empty(), "nufft: input must be non-empty");
  require(y.size() == instants_s.size(), "nufft: sample/instant count mismatch");
  require(grid.count > 0 && grid.step_hz > 0.0, "nufft: grid must be non-empty");

  const int msp = kernel_half_width(opts.tolerance);
  require(msp <= opts.max_kernel_width,
          "nufft: tolerance unreachable with configured max_kernel_width");

  if (grid.count < opts.direct_below) {
    return nufft_direct(y, instants_s, grid);
  }

  const double ratio = grid.start_hz / grid.step_hz;
  const auto k0 = static_cast<std::int64_t>(std::llround(ratio));
  require(std::abs(ratio - static_cast<double>(k0)) < 1e-6,
          "nufft: grid start must be an integer multiple of step for the fast path");
  return nufft_fast(y, instants_s, grid, k0, msp);
}

}  // namespace nyfr

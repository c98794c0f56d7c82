#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nyfr/types.hpp"

namespace nyfr {

// ---------------------------------------------------------------------------
// Uniform FFT (FFTW-backed)
// ---------------------------------------------------------------------------

// Unnormalized forward DFT: X[k] = sum_n x[n] e^{-j 2 pi k n / N}.
CVec fft(const CVec& x);
// Inverse with the 1/N factor, so ifft(fft(x)) == x.
CVec ifft(const CVec& x);

// Smallest 5-smooth integer (2^a 3^b 5^c) >= n; preferred FFT lengths.
std::int64_t next_fast_size(std::int64_t n);

// ---------------------------------------------------------------------------
// Frequency grids
// ---------------------------------------------------------------------------

// Uniform frequency grid: count bins starting at start_hz spaced step_hz.
struct FreqGrid {
  double start_hz = 0.0;
  double step_hz = 0.0;
  std::int64_t count = 0;

  double freq_of(std::int64_t i) const { return start_hz + static_cast<double>(i) * step_hz; }
  // Nearest bin index for a frequency (may fall outside [0, count)).
  std::int64_t bin_of(double f_hz) const;
};

// ---------------------------------------------------------------------------
// Nonuniform DFT (type 1: scattered time samples -> uniform frequency grid)
// ---------------------------------------------------------------------------

struct NufftOptions {
  double tolerance = 1e-7;   // target relative l2 accuracy of the fast path
  int max_kernel_width = 16; // half-width cap for the Gaussian spreading kernel
  std::int64_t direct_below = 1024;  // use the exact O(M*count) sum below this many bins
};

// Y[i] = sum_m y[m] e^{-j 2 pi f_i t_m} for f_i on `grid`.
// The grid must be harmonically aligned: start_hz an integer multiple of
// step_hz (true for every grid produced in this library), because the fast
// path evaluates integer-mode exponentials on a periodized axis.
CVec nufft_time_to_freq(const CVec& y, const std::vector<double>& instants_s,
                        const FreqGrid& grid, const NufftOptions& opts = {});

// ---------------------------------------------------------------------------
// Autocorrelation
// ---------------------------------------------------------------------------

// Two-sided lag sequence r[k], k = -(n_ref-1) .. n_ref-1, stored at
// lags[k + n_ref - 1].  n_ref is the sample count the 1/N bias used.
struct AutocorrSeq {
  CVec lags;
  std::int64_t n_ref = 0;

  std::int64_t max_lag() const { return n_ref - 1; }
  std::int64_t size() const { return static_cast<std::int64_t>(lags.size()); }
  cplx at(std::int64_t k) const { return lags[static_cast<std::size_t>(k + n_ref - 1)]; }
  cplx& at(std::int64_t k) { return lags[static_cast<std::size_t>(k + n_ref - 1)]; }
  void validate() const;
};

// Biased linear (zero-padded) estimate r[k] = (1/N) sum_n x[n+k] conj(x[n]),
// computed with length-(2N-1) transforms.  Satisfies the Hermitian property
// r[-k] = conj(r[k]) to rounding error.
AutocorrSeq autocorr_fft(const CVec& x);

// ---------------------------------------------------------------------------
// Flop accounting
// ---------------------------------------------------------------------------

enum class FlopMethod { proposed, time_domain, freq_domain };

std::string to_string(FlopMethod m);
FlopMethod flop_method_from_string(const std::string& s);

struct FlopReport {
  FlopMethod method = FlopMethod::proposed;
  std::int64_t n = 0;            // reconstruction grid size
  std::int64_t m = 0;            // measurement length (0 where unused)
  std::int64_t l_snapshots = 0;  // snapshot count (0 where unused)
  std::int64_t sparsity_k = 0;   // assumed spectral occupancy (0 where unused)
  double total_flops = 0.0;
};

// Closed-form complexity models (logs base 2):
//   proposed:    (k+1) N log N + (6N-3) log(2N-1) + (2N-1)
//   time_domain: L M^2 + N M^2 + (2N-1) log(2N-1)
//   freq_domain: M log M + L M^2 + N M^2
FlopReport flop_count(FlopMethod method, std::int64_t n, std::int64_t m = 0,
                      std::int64_t l_snapshots = 0, std::int64_t sparsity_k = 0);

}  // namespace nyfr

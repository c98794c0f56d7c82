#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "nyfr/frontend.hpp"
#include "nyfr/kernels.hpp"
#include "nyfr/types.hpp"

namespace nyfr {

// ---------------------------------------------------------------------------
// Sensing matrix
// ---------------------------------------------------------------------------

// Everything needed to write the acquisition chain as one M x N linear map on
// the label-ordered spectrum: y = A S, where S is the length-N label spectrum
// of the wideband signal.  Zone l's block of A is the low-rate inverse DFT
// scaled by the zone's modulation phase:
//   A[m, l*M + r] = omega_s * e^{-j l theta(t_m)} * (1/N) e^{j 2 pi (r - M/2) m / M}.
struct SensingMatrixSpec {
  std::int64_t n = 0;
  std::int64_t m_count = 0;
  std::int64_t nz_count = 0;
  std::int64_t harmonic_order = 0;
  double omega_s = 0.0;
  std::vector<double> theta;  // theta(t_m) at the M low-rate instants

  static SensingMatrixSpec from_config(const NyfrConfig& cfg);
  void validate() const;
};

Eigen::MatrixXcd build_sensing_matrix(const SensingMatrixSpec& spec);

// Analysis transform of the label-ordered grid: W[i, t] = e^{-j 2 pi f_i t dt}.
// Applied to a record on the uniform wideband grid it returns the label
// spectrum S (unnormalized-DFT convention, inverting the synthesis sum
// x[t] = (1/N) sum_i S_i e^{+j 2 pi f_i t dt}).
Eigen::MatrixXcd label_analysis_matrix(const NyfrConfig& cfg);

// The same acquisition map expressed on time-domain wideband samples:
// A_t = A W, so y = A_t x for x on the uniform grid.  The covariance baselines
// parameterize second-order statistics by time lags and therefore consume this
// form; feeding them the spectral-input matrix misaligns their Toeplitz basis.
Eigen::MatrixXcd time_sensing_matrix(const NyfrConfig& cfg);

// Maps between vec(R) indices (column-major, M = n rows) and lags, i.e. the
// selection matrix of the Toeplitz structure realized as an index table:
// vec index p = j*n + i belongs to lag i - j.
struct SelectionMatrix {
  std::int64_t n = 0;

  std::int64_t lag_of(std::int64_t vec_index) const {
    const std::int64_t i = vec_index % n;
    const std::int64_t j = vec_index / n;
    return i - j;
  }
  std::int64_t vec_count() const { return n * n; }
  std::int64_t lag_count() const { return 2 * n - 1; }
};

// ---------------------------------------------------------------------------
// Proposed reconstruction path
// ---------------------------------------------------------------------------

struct RegularizationPolicy {
  enum class Mode { zero_fill, tikhonov };
  Mode mode = Mode::zero_fill;
  // Lags where |r_p| < epsilon_rel * max|r_p| are zeroed (zero_fill) or the
  // same scale is used as the Tikhonov water level.
  double epsilon_rel = 1e-3;
};

enum class LagWindow { rect, bartlett };

std::string to_string(LagWindow w);
LagWindow lag_window_from_string(const std::string& s);
std::string to_string(RegularizationPolicy::Mode m);
RegularizationPolicy::Mode reg_mode_from_string(const std::string& s);

// Real-valued spectral estimate on a uniform frequency grid.
struct PowerSpectrum {
  std::vector<double> values;
  double freq_start_hz = 0.0;
  double freq_step_hz = 0.0;
  std::string method;

  std::int64_t size() const { return static_cast<std::int64_t>(values.size()); }
  double freq_of(std::int64_t i) const {
    return freq_start_hz + static_cast<double>(i) * freq_step_hz;
  }
  std::int64_t bin_of(double f_hz) const {
    return std::llround((f_hz - freq_start_hz) / freq_step_hz);
  }
};

// Warped-time spectral lift: evaluate the measurement's nonuniform DFT on the
// label grid and inverse-transform to a length-n Nyquist-rate record.  The
// modulation term of zone l cancels exactly at that zone's labels, so every
// folded component lands at its true frequency.  n must equal the config's
// wideband grid length.
NyquistGridSignal reconstruct_xhat(const MeasurementRecord& rec, std::int64_t n,
                                   const NufftOptions& nufft = {});

// Autocorrelation of the pulse train for this config; memoized because it
// depends only on the LO parameters and grid, not on the scene.
AutocorrSeq pulse_autocorr_ref(const NyfrConfig& cfg);

// Elementwise deconvolution r_s = r_x / r_p with small-divisor handling, then
// Hermitian symmetry re-enforced.
AutocorrSeq divide_autocorr(const AutocorrSeq& r_x, const AutocorrSeq& r_p,
                            const RegularizationPolicy& policy);

// Fourier transform of the lag sequence onto a (2N-1)-bin frequency grid
// aligned with the label band [band_start, band_start + sample_rate).  The
// grid start snaps to the nearest DFT bin of the lag transform.
PowerSpectrum power_spectrum(const AutocorrSeq& r_s, LagWindow window,
                             double sample_rate_hz, double band_start_hz);

struct PipelineResult {
  PowerSpectrum ps;
  FlopReport flops;
};

struct PipelineOptions {
  RegularizationPolicy policy;
  LagWindow window = LagWindow::rect;
  std::int64_t assumed_sparsity = 10;  // k in the complexity model
  NufftOptions nufft;
};

// Full proposed chain: lift, autocorrelate, deconvolve, transform.
PipelineResult proposed_pipeline(const MeasurementRecord& rec,
                                 const PipelineOptions& opts = {});

}  // namespace nyfr

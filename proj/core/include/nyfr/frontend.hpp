#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nyfr/kernels.hpp"
#include "nyfr/types.hpp"
#include "nyfr/waveforms.hpp"

namespace nyfr {

enum class LoModKind { none, sinusoid };

std::string to_string(LoModKind k);
LoModKind lo_mod_kind_from_string(const std::string& s);

// Local oscillator of the folding front end: nominal rate plus a slow phase
// modulation theta(t).  mod_kind none gives theta == 0 (a plain undersampler,
// useful for calibration and for demonstrating zone ambiguity).
struct LoSpec {
  double adc_rate_hz = 0.0;
  LoModKind mod_kind = LoModKind::sinusoid;
  double mod_amplitude_rad = 0.0;
  double mod_freq_hz = 0.0;
  double mod_phase_rad = 0.0;

  double omega_s() const { return kTwoPi * adc_rate_hz; }
};

// theta(t) of the LO.
double lo_phase(double t_s, const LoSpec& lo);

// Static description of the acquisition chain.  The wideband grid covers
// nz_count Nyquist zones of the ADC rate; the frequency axis is label-ordered:
// N bins spaced sample_rate/N starting at -adc_rate/2, so zone l occupies the
// contiguous bins [l*M, (l+1)*M).
struct NyfrConfig {
  LoSpec lo;
  std::int64_t nz_count = 0;       // zones covered by the wideband grid
  std::int64_t harmonic_order = 0; // LO harmonics used (0..harmonic_order-1)
  GridSpec grid;                   // wideband Nyquist grid

  std::int64_t m_count() const { return grid.n_samples / nz_count; }
  std::int64_t decimation() const { return nz_count; }
  double band_start_hz() const { return -lo.adc_rate_hz / 2.0; }
  double band_stop_hz() const {
    return grid.sample_rate_hz - lo.adc_rate_hz / 2.0;
  }
};

NyfrConfig make_nyfr_config(const LoSpec& lo, std::int64_t nz_count,
                            std::int64_t harmonic_order, const GridSpec& grid);

// Label-ordered analysis grid: grid.n_samples bins spaced bin_hz() starting
// at -adc_rate/2.
FreqGrid label_grid(const NyfrConfig& cfg);

// Nyquist-zone index of a carrier: nearest integer to f / adc_rate.
std::int64_t nz_index(double carrier_hz, double adc_rate_hz);

// Harmonic sum of the modulated LO evaluated on the wideband grid:
// p[n] = omega_s * sum_{l=0}^{K_h-1} e^{-j l (omega_s t_n + theta(t_n))}.
// One harmonic per covered zone folds each zone to baseband exactly once.
NyquistGridSignal pulse_train(const NyfrConfig& cfg);

// Pointwise product: the RF signal seen through the sampling pulse train.
NyquistGridSignal rf_sample(const NyquistGridSignal& sig,
                            const NyquistGridSignal& pulses);

// Output of the chain: M low-rate samples with their nominal (uniform) and
// modulation-warped (nonuniform) time stamps.
struct MeasurementRecord {
  CVec samples;
  std::vector<double> uniform_instants_s;
  std::vector<double> nonuniform_instants_s;
  NyfrConfig config;
};

// Ideal brickwall low-pass to the first zone followed by decimation to the
// ADC rate.
MeasurementRecord lpf_decimate(const NyquistGridSignal& x, const NyfrConfig& cfg);

// Warped sample instants t'_m = t_m - theta(t_m) / omega_s.  Rejects
// modulations that break strict monotonicity.
std::vector<double> nonuniform_instants(const NyfrConfig& cfg,
                                        std::int64_t m_count);

}  // namespace nyfr

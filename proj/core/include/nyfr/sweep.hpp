#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "nyfr/baselines.hpp"
#include "nyfr/detection.hpp"
#include "nyfr/frontend.hpp"
#include "nyfr/reconstruction.hpp"
#include "nyfr/rng.hpp"
#include "nyfr/types.hpp"
#include "nyfr/waveforms.hpp"

namespace nyfr {

enum class SweepAxis {
  snr_db,
  pulse_len_s,
  lfm_bandwidth_hz,
  lo_mod_freq_hz,
  lo_mod_amplitude_rad,
};

std::string to_string(SweepAxis a);
SweepAxis sweep_axis_from_string(const std::string& s);

// Template for randomized scenes: each trial draws fresh carriers, start
// times and phases from this description.
struct SweepScene {
  std::vector<SignalKind> kinds = {SignalKind::mp};
  std::vector<double> amplitudes;  // empty -> 1.0, 1.2, 1.5, ...
  double carrier_min_hz = 2e9;
  double carrier_max_hz = 18e9;
  double pulse_len_s = 0.0;  // 0 -> whole record
  bool random_start = true;
  double symbol_rate_hz = 1e7;
  std::string code = "1001100110";
  double lfm_bandwidth_hz = 8e6;
  double snr_db = 10.0;
  // Carriers stay this many analysis bins away from Nyquist-zone edges (plus
  // an automatic allowance for each signal's own bandwidth).
  double guard_bins = 3.0;
  // Additional zone-edge guard as a fraction of the ADC rate.  A carrier whose
  // folded offset nu approaches +/-f_adc/2 is intrinsically ambiguous between
  // adjacent zones: the residual modulation indices (nu/f_adc)*A of the true
  // zone and (1-nu/f_adc)*A of the neighbour converge, so the two spectral
  // replicas become equally strong.  0.15 keeps their power ratio above ~3 dB.
  double zone_guard_frac = 0.15;
  double min_separation_hz = 0.0;  // 0 -> automatic
};

struct SweepSpec {
  NyfrConfig config;
  SweepScene scene;
  SweepAxis axis = SweepAxis::snr_db;
  std::vector<double> values;
  std::int64_t trials = 100;
  std::uint64_t base_seed = 1;
  FlopMethod method = FlopMethod::proposed;
  std::int64_t snapshots = 100;  // covariance baselines only
  PipelineOptions pipeline;
  DetectionPolicy detection;
  BaselineOptions baseline;
  int threads = 1;
};

// Randomized scene draw honoring zone-edge guards and pairwise separation.
// Throws when the constraints cannot be satisfied.
std::vector<SignalSpec> draw_scene(const NyfrConfig& cfg, const SweepScene& scene,
                                   Philox4x32& rng);

// Per-axis-point immutable state: the axis-adjusted config/scene, the pulse
// train, and (for baselines) the factorized solver, shared across trials.
struct SweepPointContext {
  NyfrConfig cfg;
  SweepScene scene;
  NyquistGridSignal pulses;
  std::shared_ptr<const TimeBaselineContext> time_ctx;
  std::shared_ptr<const FreqBaselineContext> freq_ctx;
};

SweepPointContext make_point_context(const SweepSpec& spec, double axis_value);

struct TrialResult {
  bool eligible = false;
  bool failed = false;
  std::string error;
  std::vector<double> truth_hz;
  std::vector<TruthBand> truth;
  std::vector<Detection> detections;
  double flops = 0.0;
};

// One fully deterministic trial: the (base_seed, point, trial) triple fixes
// every random draw.
TrialResult run_trial(const SweepSpec& spec, const SweepPointContext& ctx,
                      std::int64_t point_index, std::int64_t trial_index);

struct SweepPointResult {
  double axis_value = 0.0;
  std::int64_t eligible = 0;
  std::int64_t total = 0;
  std::int64_t errors = 0;
  double accuracy_pct = 0.0;
  double mean_flops = 0.0;
  double wall_ms = 0.0;
  std::vector<std::string> error_samples;
};

struct SweepResult {
  SweepAxis axis;
  FlopMethod method;
  std::vector<SweepPointResult> points;
};

SweepResult run_sweep(const SweepSpec& spec);

}  // namespace nyfr

#include "nyfr/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace nyfr {

std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::snr_db: return "snr_db";
    case SweepAxis::pulse_len_s: return "pulse_len_s";
    case SweepAxis::lfm_bandwidth_hz: return "lfm_bandwidth_hz";
    case SweepAxis::lo_mod_freq_hz: return "lo_mod_freq_hz";
    case SweepAxis::lo_mod_amplitude_rad: return "lo_mod_amplitude_rad";
  }
  return "unknown";
}

SweepAxis sweep_axis_from_string(const std::string& s) {
  if (s == "snr_db") return SweepAxis::snr_db;
  if (s == "pulse_len_s") return SweepAxis::pulse_len_s;
  if (s == "lfm_bandwidth_hz") return SweepAxis::lfm_bandwidth_hz;
  if (s == "lo_mod_freq_hz") return SweepAxis::lo_mod_freq_hz;
  if (s == "lo_mod_amplitude_rad") return SweepAxis::lo_mod_amplitude_rad;
  throw std::invalid_argument("unknown sweep axis: " + s);
}

namespace {

double default_amplitude(std::size_t i) {
  switch (i) {
    case 0: return 1.0;
    case 1: return 1.2;
    case 2: return 1.5;
    default: return 1.0 + 0.25 * static_cast<double>(i);
  }
}

// Half-bandwidth allowance for a signal kind, used to keep its spectral
// support clear of zone edges and of the other emitters.
double half_width_hz(SignalKind kind, const SweepScene& scene, double pulse_len) {
  switch (kind) {
    case SignalKind::mp: return 2.0 / pulse_len;
    case SignalKind::bpsk: return 2.0 * scene.symbol_rate_hz;
    case SignalKind::lfm: return scene.lfm_bandwidth_hz / 2.0 + 2.0 / pulse_len;
  }
  return 0.0;
}

double zone_edge_distance_hz(double carrier_hz, double adc_rate_hz) {
  const double u = carrier_hz / adc_rate_hz + 0.5;
  return std::abs(u - std::round(u)) * adc_rate_hz;
}

}  // namespace

std::vector<SignalSpec> draw_scene(const NyfrConfig& cfg, const SweepScene& scene,
                                   Philox4x32& rng) {
  require(!scene.kinds.empty(), "draw_scene: no signal kinds");
  require(scene.carrier_max_hz > scene.carrier_min_hz, "draw_scene: empty carrier range");
  require(scene.carrier_min_hz >= cfg.band_start_hz() &&
              scene.carrier_max_hz <= cfg.band_stop_hz(),
          "draw_scene: carrier range outside the surveillance band");

  const double duration = cfg.grid.duration_s();
  const double pulse_len =
      scene.pulse_len_s > 0.0 ? scene.pulse_len_s : duration;
  require(pulse_len <= duration * (1.0 + 1e-12),
          "draw_scene: pulse longer than the record");
  const double guard_hz =
      std::max(scene.guard_bins * cfg.grid.bin_hz() * cfg.nz_count,
               scene.zone_guard_frac * cfg.lo.adc_rate_hz);

  std::vector<SignalSpec> specs;
  std::vector<double> margins;
  for (std::size_t i = 0; i < scene.kinds.size(); ++i) {
    SignalSpec s;
    s.kind = scene.kinds[i];
    s.amplitude = i < scene.amplitudes.size() ? scene.amplitudes[i]
                                              : default_amplitude(i);
    s.pulse_len_s = pulse_len;
    s.symbol_rate_hz = scene.symbol_rate_hz;
    s.code = scene.code;
    if (s.kind == SignalKind::bpsk && s.code.empty()) {
      // Empty code requests a fresh random code per trial.
      const auto chips =
          static_cast<std::int64_t>(std::ceil(pulse_len * s.symbol_rate_hz)) + 1;
      const std::int64_t n_bits = std::clamp<std::int64_t>(chips, 4, 64);
      for (std::int64_t b = 0; b < n_bits; ++b) {
        s.code.push_back(rng.next_double() < 0.5 ? '0' : '1');
      }
    }
    s.bandwidth_hz = scene.lfm_bandwidth_hz;
    const double margin = guard_hz + half_width_hz(s.kind, scene, pulse_len);

    bool placed = false;
    for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
      const double c = scene.carrier_min_hz +
                       rng.next_double() *
                           (scene.carrier_max_hz - scene.carrier_min_hz);
      if (zone_edge_distance_hz(c, cfg.lo.adc_rate_hz) < margin) continue;
      bool clear = true;
      for (std::size_t j = 0; j < specs.size(); ++j) {
        double min_sep = margin + margins[j] + 10.0 * cfg.grid.bin_hz();
        if (scene.min_separation_hz > 0.0) {
          min_sep = std::max(min_sep, scene.min_separation_hz);
        }
        if (std::abs(c - specs[j].carrier_hz) < min_sep) {
          clear = false;
          break;
        }
      }
      if (!clear) continue;
      s.carrier_hz = c;
      placed = true;
    }
    require(placed, "draw_scene: could not place carrier under guard constraints");

    s.initial_phase_rad = rng.next_double() * kTwoPi;
    if (scene.random_start && pulse_len < duration) {
      s.start_time_s = rng.next_double() * (duration - pulse_len);
    }
    specs.push_back(s);
    margins.push_back(margin);
  }
  return specs;
}

SweepPointContext make_point_context(const SweepSpec& spec, double axis_value) {
  SweepPointContext ctx;
  ctx.cfg = spec.config;
  ctx.scene = spec.scene;
  switch (spec.axis) {
    case SweepAxis::snr_db:
      ctx.scene.snr_db = axis_value;
      break;
    case SweepAxis::pulse_len_s:
      ctx.scene.pulse_len_s = axis_value;
      break;
    case SweepAxis::lfm_bandwidth_hz:
      ctx.scene.lfm_bandwidth_hz = axis_value;
      break;
    case SweepAxis::lo_mod_freq_hz: {
      LoSpec lo = ctx.cfg.lo;
      lo.mod_freq_hz = axis_value;
      ctx.cfg = make_nyfr_config(lo, ctx.cfg.nz_count, ctx.cfg.harmonic_order,
                                 ctx.cfg.grid);
      break;
    }
    case SweepAxis::lo_mod_amplitude_rad: {
      LoSpec lo = ctx.cfg.lo;
      lo.mod_amplitude_rad = axis_value;
      ctx.cfg = make_nyfr_config(lo, ctx.cfg.nz_count, ctx.cfg.harmonic_order,
                                 ctx.cfg.grid);
      break;
    }
  }
  ctx.pulses = pulse_train(ctx.cfg);
  if (spec.method == FlopMethod::time_domain) {
    const Eigen::MatrixXcd a = time_sensing_matrix(ctx.cfg);
    ctx.time_ctx = std::make_shared<TimeBaselineContext>(
        make_time_baseline_context(a, spec.baseline));
  } else if (spec.method == FlopMethod::freq_domain) {
    const Eigen::MatrixXcd a = time_sensing_matrix(ctx.cfg);
    const Eigen::MatrixXcd b = freq_sensing_matrix(a, ctx.cfg);
    ctx.freq_ctx = std::make_shared<FreqBaselineContext>(
        make_freq_baseline_context(b, spec.baseline));
  }
  return ctx;
}

TrialResult run_trial(const SweepSpec& spec, const SweepPointContext& ctx,
                      std::int64_t point_index, std::int64_t trial_index) {
  TrialResult result;
  const std::uint64_t seed = mix_seed(
      spec.base_seed, static_cast<std::uint64_t>(point_index),
      static_cast<std::uint64_t>(trial_index));
  try {
    Philox4x32 rng(seed, 0);
    std::vector<SignalSpec> specs = draw_scene(ctx.cfg, ctx.scene, rng);
    for (const auto& s : specs) {
      result.truth_hz.push_back(s.carrier_hz);
      TruthBand band;
      band.freq_hz = s.carrier_hz;
      switch (s.kind) {
        case SignalKind::mp:
          band.support_hz = 0.0;
          break;
        case SignalKind::bpsk:
          band.support_hz = s.symbol_rate_hz;
          band.continuous_support = false;
          break;
        case SignalKind::lfm:
          band.support_hz = s.bandwidth_hz;
          band.continuous_support = true;
          break;
      }
      result.truth.push_back(band);
    }

    PowerSpectrum ps;
    if (spec.method == FlopMethod::proposed) {
      std::vector<NyquistGridSignal> parts;
      for (const auto& s : specs) parts.push_back(gen_signal(s, ctx.cfg.grid));
      NyquistGridSignal rf = add_awgn(mix(parts), ctx.scene.snr_db, seed, 1);
      MeasurementRecord rec = lpf_decimate(rf_sample(rf, ctx.pulses), ctx.cfg);
      PipelineResult pr = proposed_pipeline(rec, spec.pipeline);
      ps = std::move(pr.ps);
      result.flops = pr.flops.total_flops;
    } else {
      // Snapshot ensemble: carriers fixed for the trial, phases and noise
      // redrawn per snapshot.
      std::vector<CVec> snapshots;
      snapshots.reserve(static_cast<std::size_t>(spec.snapshots));
      for (std::int64_t l = 0; l < spec.snapshots; ++l) {
        std::vector<NyquistGridSignal> parts;
        for (auto s : specs) {
          s.initial_phase_rad = rng.next_double() * kTwoPi;
          parts.push_back(gen_signal(s, ctx.cfg.grid));
        }
        NyquistGridSignal rf = add_awgn(mix(parts), ctx.scene.snr_db, seed,
                                        100 + static_cast<std::uint64_t>(l));
        snapshots.push_back(
            lpf_decimate(rf_sample(rf, ctx.pulses), ctx.cfg).samples);
      }
      if (spec.method == FlopMethod::time_domain) {
        BaselineResult br = baseline_time_domain_with(*ctx.time_ctx, snapshots);
        ps = baseline_spectrum(br, spec.pipeline.window, ctx.cfg);
        result.flops = br.flops.total_flops;
      } else {
        FreqBaselineResult fr =
            baseline_freq_domain_with(*ctx.freq_ctx, snapshots, ctx.cfg);
        ps = baseline_spectrum(fr);
        result.flops = fr.flops.total_flops;
      }
    }

    result.detections = detect_peaks(ps, spec.detection);
    result.eligible =
        is_eligible(result.detections, result.truth, ps, spec.detection);
  } catch (const std::exception& e) {
    result.failed = true;
    result.eligible = false;
    result.error = e.what();
  }
  return result;
}

SweepResult run_sweep(const SweepSpec& spec) {
  require(!spec.values.empty(), "run_sweep: no axis values");
  require(spec.trials > 0, "run_sweep: trials must be positive");

  SweepResult result;
  result.axis = spec.axis;
  result.method = spec.method;

  for (std::size_t pi = 0; pi < spec.values.size(); ++pi) {
    const double value = spec.values[pi];
    const auto t0 = std::chrono::steady_clock::now();
    const SweepPointContext ctx = make_point_context(spec, value);

    std::vector<TrialResult> trials(static_cast<std::size_t>(spec.trials));
    const int workers = std::max(1, spec.threads);
    if (workers == 1) {
      for (std::int64_t ti = 0; ti < spec.trials; ++ti) {
        trials[static_cast<std::size_t>(ti)] =
            run_trial(spec, ctx, static_cast<std::int64_t>(pi), ti);
      }
    } else {
      std::vector<std::thread> pool;
      std::atomic<std::int64_t> next{0};
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          while (true) {
            const std::int64_t ti = next.fetch_add(1);
            if (ti >= spec.trials) break;
            trials[static_cast<std::size_t>(ti)] =
                run_trial(spec, ctx, static_cast<std::int64_t>(pi), ti);
          }
        });
      }
      for (auto& th : pool) th.join();
    }

    SweepPointResult point;
    point.axis_value = value;
    point.total = spec.trials;
    double flops_sum = 0.0;
    for (const auto& tr : trials) {
      if (tr.eligible) ++point.eligible;
      if (tr.failed) {
        ++point.errors;
        if (point.error_samples.size() < 3) point.error_samples.push_back(tr.error);
      }
      flops_sum += tr.flops;
    }
    point.accuracy_pct = 100.0 * static_cast<double>(point.eligible) /
                         static_cast<double>(point.total);
    point.mean_flops = flops_sum / static_cast<double>(spec.trials);
    point.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    result.points.push_back(std::move(point));
  }
  return result;
}

}  // namespace nyfr

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "nyfr/sweep.hpp"

using namespace nyfr;

namespace {

NyfrConfig small_config() {
  LoSpec lo;
  lo.adc_rate_hz = 4e9;
  lo.mod_kind = LoModKind::sinusoid;
  lo.mod_amplitude_rad = 2.0;
  lo.mod_freq_hz = 31.25e6;
  return make_nyfr_config(lo, 4, 4, make_grid(1024, 16e9));
}

NyfrConfig tiny_config() {
  LoSpec lo;
  lo.adc_rate_hz = 4e9;
  lo.mod_kind = LoModKind::sinusoid;
  lo.mod_amplitude_rad = 2.0;
  lo.mod_freq_hz = 250e6;
  return make_nyfr_config(lo, 4, 4, make_grid(256, 16e9));
}

// Distance from the nearest Nyquist-zone edge (edges at (z + 1/2) * f_adc).
double zone_edge_distance(double carrier_hz, double adc_rate_hz) {
  const double u = carrier_hz / adc_rate_hz + 0.5;
  return std::abs(u - std::round(u)) * adc_rate_hz;
}

}  // namespace

TEST_CASE("sweep axis names round-trip") {
  for (SweepAxis a :
       {SweepAxis::snr_db, SweepAxis::pulse_len_s, SweepAxis::lfm_bandwidth_hz,
        SweepAxis::lo_mod_freq_hz, SweepAxis::lo_mod_amplitude_rad}) {
    CHECK(sweep_axis_from_string(to_string(a)) == a);
  }
  CHECK_THROWS_AS(sweep_axis_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("draw_scene honors guards, separation and defaults") {
  const NyfrConfig cfg = small_config();
  SweepScene scene;
  scene.kinds = {SignalKind::mp, SignalKind::bpsk, SignalKind::lfm};
  scene.carrier_min_hz = 2.5e9;  // the 4-zone grid spans [-2, 14) GHz
  scene.carrier_max_hz = 13.5e9;
  scene.pulse_len_s = 20e-9;
  scene.random_start = true;

  const double duration = cfg.grid.duration_s();
  const double guard_hz =
      std::max(scene.guard_bins * cfg.grid.bin_hz() * cfg.nz_count,
               scene.zone_guard_frac * cfg.lo.adc_rate_hz);
  const auto half_width = [&scene](SignalKind kind) {
    switch (kind) {
      case SignalKind::mp: return 2.0 / scene.pulse_len_s;
      case SignalKind::bpsk: return 2.0 * scene.symbol_rate_hz;
      case SignalKind::lfm:
        return scene.lfm_bandwidth_hz / 2.0 + 2.0 / scene.pulse_len_s;
    }
    return 0.0;
  };

  for (std::uint64_t rep = 0; rep < 50; ++rep) {
    Philox4x32 rng(900 + rep, 0);
    const std::vector<SignalSpec> specs = draw_scene(cfg, scene, rng);
    REQUIRE(specs.size() == 3);
    CHECK(specs[0].amplitude == 1.0);
    CHECK(specs[1].amplitude == 1.2);
    CHECK(specs[2].amplitude == 1.5);

    for (const auto& s : specs) {
      CHECK(s.carrier_hz >= scene.carrier_min_hz);
      CHECK(s.carrier_hz <= scene.carrier_max_hz);
      const double margin = guard_hz + half_width(s.kind);
      CHECK(zone_edge_distance(s.carrier_hz, cfg.lo.adc_rate_hz) >= margin);
      CHECK(s.start_time_s >= 0.0);
      CHECK(s.start_time_s <= duration - scene.pulse_len_s + 1e-15);
      CHECK(s.pulse_len_s == scene.pulse_len_s);
    }
    for (std::size_t i = 0; i < specs.size(); ++i) {
      for (std::size_t j = i + 1; j < specs.size(); ++j) {
        const double min_sep = half_width(specs[i].kind) +
                               half_width(specs[j].kind) + 2.0 * guard_hz +
                               10.0 * cfg.grid.bin_hz();
        CHECK(std::abs(specs[i].carrier_hz - specs[j].carrier_hz) >=
              min_sep * (1.0 - 1e-12));
      }
    }
  }
}

TEST_CASE("draw_scene fixed start and whole-record default length") {
  const NyfrConfig cfg = small_config();
  SweepScene scene;
  scene.kinds = {SignalKind::mp};
  scene.carrier_min_hz = 2.5e9;
  scene.carrier_max_hz = 13.5e9;
  scene.random_start = false;
  scene.pulse_len_s = 0.0;  // whole record

  Philox4x32 rng(7, 0);
  const std::vector<SignalSpec> specs = draw_scene(cfg, scene, rng);
  REQUIRE(specs.size() == 1);
  CHECK(specs[0].start_time_s == 0.0);
  CHECK(specs[0].pulse_len_s == doctest::Approx(cfg.grid.duration_s()));
}

TEST_CASE("draw_scene empty BPSK code draws a fresh random code") {
  const NyfrConfig cfg = small_config();
  SweepScene scene;
  scene.kinds = {SignalKind::bpsk};
  scene.carrier_min_hz = 2.5e9;
  scene.carrier_max_hz = 13.5e9;
  scene.code = "";
  scene.symbol_rate_hz = 2e8;
  scene.pulse_len_s = 40e-9;

  Philox4x32 rng_a(11, 0);
  Philox4x32 rng_b(12, 0);
  const std::string code_a = draw_scene(cfg, scene, rng_a)[0].code;
  const std::string code_b = draw_scene(cfg, scene, rng_b)[0].code;
  CHECK(code_a.size() >= 4);
  CHECK(code_a.size() <= 64);
  for (char c : code_a) CHECK((c == '0' || c == '1'));
  CHECK(code_a != code_b);  // different draws with overwhelming probability
}

TEST_CASE("draw_scene rejects impossible or malformed requests") {
  const NyfrConfig cfg = small_config();
  Philox4x32 rng(1, 0);

  SweepScene scene;
  scene.kinds = {};
  CHECK_THROWS_AS(draw_scene(cfg, scene, rng), std::invalid_argument);

  scene.kinds = {SignalKind::mp};
  scene.carrier_min_hz = 5e9;
  scene.carrier_max_hz = 4e9;
  CHECK_THROWS_AS(draw_scene(cfg, scene, rng), std::invalid_argument);

  scene.carrier_min_hz = 2.5e9;
  scene.carrier_max_hz = 100e9;  // beyond the surveillance band
  CHECK_THROWS_AS(draw_scene(cfg, scene, rng), std::invalid_argument);

  // Range strictly inside the zone-edge guard around 2 GHz: no legal spot.
  scene.carrier_min_hz = 1.9e9;
  scene.carrier_max_hz = 2.1e9;
  CHECK_THROWS_AS(draw_scene(cfg, scene, rng), std::invalid_argument);

  scene.carrier_min_hz = 2.5e9;
  scene.carrier_max_hz = 13.5e9;
  scene.pulse_len_s = 1.0;  // longer than the record
  CHECK_THROWS_AS(draw_scene(cfg, scene, rng), std::invalid_argument);
}

TEST_CASE("make_point_context applies the axis value") {
  SweepSpec spec;
  spec.config = tiny_config();
  spec.scene.kinds = {SignalKind::mp};

  spec.axis = SweepAxis::snr_db;
  CHECK(make_point_context(spec, -3.0).scene.snr_db == -3.0);

  spec.axis = SweepAxis::pulse_len_s;
  CHECK(make_point_context(spec, 5e-9).scene.pulse_len_s == 5e-9);

  spec.axis = SweepAxis::lfm_bandwidth_hz;
  CHECK(make_point_context(spec, 3e8).scene.lfm_bandwidth_hz == 3e8);

  spec.axis = SweepAxis::lo_mod_freq_hz;
  {
    const SweepPointContext ctx = make_point_context(spec, 125e6);
    CHECK(ctx.cfg.lo.mod_freq_hz == 125e6);
    CHECK(ctx.pulses.samples.size() ==
          static_cast<std::size_t>(spec.config.grid.n_samples));
  }

  spec.axis = SweepAxis::lo_mod_amplitude_rad;
  CHECK(make_point_context(spec, 1.25).cfg.lo.mod_amplitude_rad == 1.25);
}

TEST_CASE("make_point_context builds solver state only for baseline methods") {
  SweepSpec spec;
  spec.config = tiny_config();
  spec.scene.kinds = {SignalKind::mp};
  spec.axis = SweepAxis::snr_db;

  spec.method = FlopMethod::proposed;
  {
    const SweepPointContext ctx = make_point_context(spec, 10.0);
    CHECK(ctx.time_ctx == nullptr);
    CHECK(ctx.freq_ctx == nullptr);
  }
  spec.method = FlopMethod::time_domain;
  {
    const SweepPointContext ctx = make_point_context(spec, 10.0);
    REQUIRE(ctx.time_ctx != nullptr);
    CHECK(ctx.time_ctx->n == spec.config.grid.n_samples);
    CHECK(ctx.freq_ctx == nullptr);
  }
  spec.method = FlopMethod::freq_domain;
  {
    const SweepPointContext ctx = make_point_context(spec, 10.0);
    CHECK(ctx.time_ctx == nullptr);
    REQUIRE(ctx.freq_ctx != nullptr);
    CHECK(ctx.freq_ctx->n == spec.config.grid.n_samples);
  }
}

TEST_CASE("run_trial is deterministic in (seed, point, trial)") {
  SweepSpec spec;
  spec.config = small_config();
  spec.scene.kinds = {SignalKind::mp, SignalKind::lfm};
  spec.scene.carrier_min_hz = 2.5e9;
  spec.scene.carrier_max_hz = 13.5e9;
  spec.scene.lfm_bandwidth_hz = 2e8;
  spec.scene.snr_db = 10.0;
  spec.base_seed = 321;
  spec.detection.smooth_bins = 3;
  spec.detection.min_separation_bins = 8;
  spec.detection.coverage_frac = 0.0;
  const SweepPointContext ctx = make_point_context(spec, 10.0);

  const TrialResult a = run_trial(spec, ctx, 2, 17);
  const TrialResult b = run_trial(spec, ctx, 2, 17);
  CHECK_FALSE(a.failed);
  CHECK(a.eligible == b.eligible);
  REQUIRE(a.truth_hz.size() == b.truth_hz.size());
  for (std::size_t i = 0; i < a.truth_hz.size(); ++i) {
    CHECK(a.truth_hz[i] == b.truth_hz[i]);
  }
  REQUIRE(a.detections.size() == b.detections.size());
  for (std::size_t i = 0; i < a.detections.size(); ++i) {
    CHECK(a.detections[i].bin == b.detections[i].bin);
    CHECK(a.detections[i].power == b.detections[i].power);
  }
  CHECK(a.flops == b.flops);

  // A different trial index draws a different scene.
  const TrialResult c = run_trial(spec, ctx, 2, 18);
  CHECK(a.truth_hz != c.truth_hz);
}

TEST_CASE("run_trial fills truth bands according to signal kind") {
  SweepSpec spec;
  spec.config = small_config();
  spec.scene.kinds = {SignalKind::mp, SignalKind::bpsk, SignalKind::lfm};
  spec.scene.carrier_min_hz = 2.5e9;
  spec.scene.carrier_max_hz = 13.5e9;
  spec.scene.symbol_rate_hz = 1e8;
  spec.scene.lfm_bandwidth_hz = 2.5e8;
  const SweepPointContext ctx = make_point_context(spec, 10.0);

  const TrialResult tr = run_trial(spec, ctx, 0, 0);
  REQUIRE(tr.truth.size() == 3);
  CHECK(tr.truth[0].support_hz == 0.0);
  CHECK_FALSE(tr.truth[0].continuous_support);
  CHECK(tr.truth[1].support_hz == spec.scene.symbol_rate_hz);
  CHECK_FALSE(tr.truth[1].continuous_support);
  CHECK(tr.truth[2].support_hz == spec.scene.lfm_bandwidth_hz);
  CHECK(tr.truth[2].continuous_support);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(tr.truth[i].freq_hz == tr.truth_hz[i]);
  }
}

TEST_CASE("run_trial captures scene-draw failures instead of throwing") {
  SweepSpec spec;
  spec.config = small_config();
  spec.scene.kinds = {SignalKind::mp};
  spec.scene.carrier_min_hz = 1.9e9;  // entirely inside the zone-edge guard
  spec.scene.carrier_max_hz = 2.1e9;
  const SweepPointContext ctx = make_point_context(spec, 10.0);

  const TrialResult tr = run_trial(spec, ctx, 0, 0);
  CHECK(tr.failed);
  CHECK_FALSE(tr.eligible);
  CHECK_FALSE(tr.error.empty());
}

TEST_CASE("run_sweep aggregates exactly the per-trial results") {
  SweepSpec spec;
  spec.config = small_config();
  spec.scene.kinds = {SignalKind::mp};
  spec.scene.carrier_min_hz = 2.5e9;
  spec.scene.carrier_max_hz = 13.5e9;
  spec.scene.snr_db = 10.0;
  spec.base_seed = 5;
  spec.trials = 6;
  spec.values = {10.0, -20.0};
  spec.axis = SweepAxis::snr_db;
  spec.detection.smooth_bins = 3;
  spec.detection.min_separation_bins = 8;
  spec.detection.coverage_frac = 0.0;

  const SweepResult sr = run_sweep(spec);
  REQUIRE(sr.points.size() == 2);
  CHECK(sr.axis == SweepAxis::snr_db);
  CHECK(sr.method == FlopMethod::proposed);

  for (std::size_t pi = 0; pi < spec.values.size(); ++pi) {
    const SweepPointContext ctx = make_point_context(spec, spec.values[pi]);
    std::int64_t eligible = 0;
    double flops_sum = 0.0;
    for (std::int64_t ti = 0; ti < spec.trials; ++ti) {
      const TrialResult tr =
          run_trial(spec, ctx, static_cast<std::int64_t>(pi), ti);
      if (tr.eligible) ++eligible;
      flops_sum += tr.flops;
    }
    CHECK(sr.points[pi].axis_value == spec.values[pi]);
    CHECK(sr.points[pi].total == spec.trials);
    CHECK(sr.points[pi].eligible == eligible);
    CHECK(sr.points[pi].accuracy_pct ==
          doctest::Approx(100.0 * static_cast<double>(eligible) /
                          static_cast<double>(spec.trials)));
    CHECK(sr.points[pi].mean_flops ==
          doctest::Approx(flops_sum / static_cast<double>(spec.trials)));
    CHECK(sr.points[pi].errors == 0);
    CHECK(sr.points[pi].wall_ms > 0.0);
  }

  // High SNR separates from hopeless SNR.
  CHECK(sr.points[0].eligible > sr.points[1].eligible);

  // Threading must not change any outcome.
  spec.threads = 2;
  const SweepResult sr2 = run_sweep(spec);
  REQUIRE(sr2.points.size() == sr.points.size());
  for (std::size_t pi = 0; pi < sr.points.size(); ++pi) {
    CHECK(sr2.points[pi].eligible == sr.points[pi].eligible);
    CHECK(sr2.points[pi].errors == sr.points[pi].errors);
  }
}

TEST_CASE("run_sweep counts failed trials and keeps error samples") {
  SweepSpec spec;
  spec.config = small_config();
  spec.scene.kinds = {SignalKind::mp};
  spec.scene.carrier_min_hz = 1.9e9;
  spec.scene.carrier_max_hz = 2.1e9;
  spec.trials = 5;
  spec.values = {10.0};

  const SweepResult sr = run_sweep(spec);
  REQUIRE(sr.points.size() == 1);
  CHECK(sr.points[0].errors == 5);
  CHECK(sr.points[0].eligible == 0);
  CHECK(sr.points[0].accuracy_pct == 0.0);
  CHECK(sr.points[0].error_samples.size() == 3);  // capped at three samples
}

TEST_CASE("run_sweep validates its spec") {
  SweepSpec spec;
  spec.config = small_config();
  spec.values = {};
  CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
  spec.values = {10.0};
  spec.trials = 0;
  CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
}

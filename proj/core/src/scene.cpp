#include "nyfr/scene.hpp"

#include <cmath>
#include <fstream>

namespace nyfr {

using nlohmann::json;

SceneConfig default_scene() {
  SceneConfig scene;
  LoSpec lo;
  lo.adc_rate_hz = 4e9;
  lo.mod_kind = LoModKind::sinusoid;
  lo.mod_amplitude_rad = 2.0;
  lo.mod_freq_hz = 2e7;
  lo.mod_phase_rad = 0.0;
  scene.config = make_nyfr_config(lo, 8, 8, make_grid(32000, 32e9));

  SignalSpec mp;
  mp.kind = SignalKind::mp;
  mp.carrier_hz = 1.3e9;
  mp.pulse_len_s = scene.config.grid.duration_s();
  scene.signals.push_back(mp);

  SignalSpec bpsk;
  bpsk.kind = SignalKind::bpsk;
  bpsk.carrier_hz = 7.8e9;
  bpsk.pulse_len_s = scene.config.grid.duration_s();
  bpsk.symbol_rate_hz = 1e7;
  bpsk.code = "1001100110";
  scene.signals.push_back(bpsk);

  SignalSpec lfm;
  lfm.kind = SignalKind::lfm;
  lfm.carrier_hz = 14.5e9;
  lfm.pulse_len_s = scene.config.grid.duration_s();
  lfm.bandwidth_hz = 8e6;
  scene.signals.push_back(lfm);

  scene.snr_db = 10.0;
  scene.seed = 20240901;
  return scene;
}

SceneConfig default_scene_small() {
  SceneConfig scene;
  LoSpec lo;
  lo.adc_rate_hz = 4e9;
  lo.mod_kind = LoModKind::sinusoid;
  lo.mod_amplitude_rad = 2.0;
  lo.mod_freq_hz = 31.25e6;  // two modulation cycles over the 64 ns record
  scene.config = make_nyfr_config(lo, 4, 4, make_grid(1024, 16e9));
  const double duration = scene.config.grid.duration_s();

  SignalSpec mp;
  mp.kind = SignalKind::mp;
  mp.carrier_hz = 1.3e9;
  mp.pulse_len_s = duration;
  scene.signals.push_back(mp);

  SignalSpec bpsk;
  bpsk.kind = SignalKind::bpsk;
  bpsk.carrier_hz = 6.5e9;
  bpsk.pulse_len_s = duration;
  bpsk.symbol_rate_hz = 1.25e8;
  bpsk.code = "10011001";
  scene.signals.push_back(bpsk);

  SignalSpec lfm;
  lfm.kind = SignalKind::lfm;
  lfm.carrier_hz = 13.1e9;
  lfm.pulse_len_s = duration;
  lfm.bandwidth_hz = 1.25e8;
  scene.signals.push_back(lfm);

  scene.snr_db = 10.0;
  scene.seed = 20240902;
  return scene;
}

json to_json(const LoSpec& lo) {
  return json{{"adc_rate_hz", lo.adc_rate_hz},
              {"mod_kind", to_string(lo.mod_kind)},
              {"mod_amplitude_rad", lo.mod_amplitude_rad},
              {"mod_freq_hz", lo.mod_freq_hz},
              {"mod_phase_rad", lo.mod_phase_rad}};
}

json to_json(const NyfrConfig& cfg) {
  // The wideband rate is implied (nz_count * adc_rate), so it is derived on
  // load rather than stored; the config cannot become self-inconsistent.
  return json{{"lo", to_json(cfg.lo)},
              {"nz_count", cfg.nz_count},
              {"harmonic_order", cfg.harmonic_order},
              {"n_samples", cfg.grid.n_samples}};
}

json to_json(const SignalSpec& s) {
  json j{{"kind", to_string(s.kind)},
         {"carrier_hz", s.carrier_hz},
         {"amplitude", s.amplitude},
         {"initial_phase_rad", s.initial_phase_rad},
         {"start_time_s", s.start_time_s},
         {"pulse_len_s", s.pulse_len_s}};
  if (s.kind == SignalKind::bpsk) {
    j["symbol_rate_hz"] = s.symbol_rate_hz;
    j["code"] = s.code;
  }
  if (s.kind == SignalKind::lfm) {
    j["bandwidth_hz"] = s.bandwidth_hz;
  }
  return j;
}

json to_json(const SceneConfig& scene) {
  json sig = json::array();
  for (const auto& s : scene.signals) sig.push_back(to_json(s));
  json j{{"nyfr", to_json(scene.config)},
         {"signals", sig},
         {"seed", scene.seed}};
  if (std::isinf(scene.snr_db)) {
    j["snr_db"] = nullptr;  // null encodes noiseless
  } else {
    j["snr_db"] = scene.snr_db;
  }
  return j;
}

NyfrConfig nyfr_config_from_json(const json& j) {
  LoSpec lo;
  const json& jl = j.at("lo");
  lo.adc_rate_hz = jl.at("adc_rate_hz").get<double>();
  lo.mod_kind = lo_mod_kind_from_string(jl.at("mod_kind").get<std::string>());
  lo.mod_amplitude_rad = jl.value("mod_amplitude_rad", 0.0);
  lo.mod_freq_hz = jl.value("mod_freq_hz", 0.0);
  lo.mod_phase_rad = jl.value("mod_phase_rad", 0.0);
  const auto nz = j.at("nz_count").get<std::int64_t>();
  const auto kh = j.value("harmonic_order", nz);
  const auto n = j.at("n_samples").get<std::int64_t>();
  return make_nyfr_config(lo, nz, kh,
                          make_grid(n, static_cast<double>(nz) * lo.adc_rate_hz));
}

SignalSpec signal_from_json(const json& j) {
  SignalSpec s;
  s.kind = signal_kind_from_string(j.at("kind").get<std::string>());
  s.carrier_hz = j.at("carrier_hz").get<double>();
  s.amplitude = j.value("amplitude", 1.0);
  s.initial_phase_rad = j.value("initial_phase_rad", 0.0);
  s.start_time_s = j.value("start_time_s", 0.0);
  s.pulse_len_s = j.at("pulse_len_s").get<double>();
  s.symbol_rate_hz = j.value("symbol_rate_hz", 0.0);
  s.code = j.value("code", std::string{});
  s.bandwidth_hz = j.value("bandwidth_hz", 0.0);
  return s;
}

SceneConfig scene_from_json(const json& j) {
  SceneConfig scene;
  scene.config = nyfr_config_from_json(j.at("nyfr"));
  for (const auto& js : j.at("signals")) {
    scene.signals.push_back(signal_from_json(js));
  }
  if (j.contains("snr_db") && !j.at("snr_db").is_null()) {
    scene.snr_db = j.at("snr_db").get<double>();
  } else {
    scene.snr_db = std::numeric_limits<double>::infinity();
  }
  scene.seed = j.value("seed", std::uint64_t{1});

  // Carriers must live inside the surveillance band of this chain.
  for (const auto& s : scene.signals) {
    require(s.carrier_hz >= scene.config.band_start_hz() &&
                s.carrier_hz < scene.config.band_stop_hz(),
            "scene: carrier outside the surveillance band");
    if (s.kind == SignalKind::lfm) {
      require(s.carrier_hz - s.bandwidth_hz / 2.0 >= scene.config.band_start_hz() &&
                  s.carrier_hz + s.bandwidth_hz / 2.0 < scene.config.band_stop_hz(),
              "scene: swept band leaves the surveillance band");
    }
  }
  return scene;
}

json to_json(const SweepScene& s) {
  json kinds = json::array();
  for (auto k : s.kinds) kinds.push_back(to_string(k));
  return json{{"kinds", kinds},
              {"amplitudes", s.amplitudes},
              {"carrier_min_hz", s.carrier_min_hz},
              {"carrier_max_hz", s.carrier_max_hz},
              {"pulse_len_s", s.pulse_len_s},
              {"random_start", s.random_start},
              {"symbol_rate_hz", s.symbol_rate_hz},
              {"code", s.code},
              {"lfm_bandwidth_hz", s.lfm_bandwidth_hz},
              {"snr_db", s.snr_db},
              {"guard_bins", s.guard_bins},
              {"zone_guard_frac", s.zone_guard_frac},
              {"min_separation_hz", s.min_separation_hz}};
}

json to_json(const SweepSpec& s) {
  json values = json::array();
  for (double v : s.values) values.push_back(v);
  return json{
      {"nyfr", to_json(s.config)},
      {"scene", to_json(s.scene)},
      {"axis", to_string(s.axis)},
      {"values", values},
      {"trials", s.trials},
      {"base_seed", s.base_seed},
      {"method", to_string(s.method)},
      {"snapshots", s.snapshots},
      {"pipeline",
       {{"reg_mode", to_string(s.pipeline.policy.mode)},
        {"epsilon_rel", s.pipeline.policy.epsilon_rel},
        {"window", to_string(s.pipeline.window)},
        {"assumed_sparsity", s.pipeline.assumed_sparsity},
        {"nufft_tolerance", s.pipeline.nufft.tolerance}}},
      {"detection",
       {{"gamma", s.detection.gamma},
        {"min_separation_bins", s.detection.min_separation_bins},
        {"freq_tol_bins", s.detection.freq_tol_bins},
        {"smooth_bins", s.detection.smooth_bins},
        {"coverage_frac", s.detection.coverage_frac}}},
      {"baseline",
       {{"ridge_rel", s.baseline.ridge_rel},
        {"cond_limit", s.baseline.cond_limit},
        {"trunc_eig_max", s.baseline.trunc_eig_max}}},
      {"threads", s.threads}};
}

SweepSpec sweep_from_json(const json& j) {
  SweepSpec s;
  s.config = nyfr_config_from_json(j.at("nyfr"));
  const json& js = j.at("scene");
  s.scene.kinds.clear();
  for (const auto& k : js.at("kinds")) {
    s.scene.kinds.push_back(signal_kind_from_string(k.get<std::string>()));
  }
  s.scene.amplitudes = js.value("amplitudes", std::vector<double>{});
  s.scene.carrier_min_hz = js.at("carrier_min_hz").get<double>();
  s.scene.carrier_max_hz = js.at("carrier_max_hz").get<double>();
  s.scene.pulse_len_s = js.value("pulse_len_s", 0.0);
  s.scene.random_start = js.value("random_start", true);
  s.scene.symbol_rate_hz = js.value("symbol_rate_hz", 1e7);
  s.scene.code = js.value("code", std::string{"1001100110"});
  s.scene.lfm_bandwidth_hz = js.value("lfm_bandwidth_hz", 8e6);
  s.scene.snr_db = js.value("snr_db", 10.0);
  s.scene.guard_bins = js.value("guard_bins", 3.0);
  s.scene.zone_guard_frac = js.value("zone_guard_frac", 0.15);
  s.scene.min_separation_hz = js.value("min_separation_hz", 0.0);

  s.axis = sweep_axis_from_string(j.at("axis").get<std::string>());
  s.values = j.at("values").get<std::vector<double>>();
  s.trials = j.at("trials").get<std::int64_t>();
  s.base_seed = j.value("base_seed", std::uint64_t{1});
  s.method = flop_method_from_string(j.value("method", std::string{"proposed"}));
  s.snapshots = j.value("snapshots", std::int64_t{100});
  if (j.contains("pipeline")) {
    const json& jp = j.at("pipeline");
    s.pipeline.policy.mode =
        reg_mode_from_string(jp.value("reg_mode", std::string{"zero_fill"}));
    s.pipeline.policy.epsilon_rel = jp.value("epsilon_rel", 1e-3);
    s.pipeline.window =
        lag_window_from_string(jp.value("window", std::string{"rect"}));
    s.pipeline.assumed_sparsity = jp.value("assumed_sparsity", std::int64_t{10});
    s.pipeline.nufft.tolerance = jp.value("nufft_tolerance", 1e-7);
  }
  // Absent fields mean "struct default" so the JSON schema cannot drift from
  // the in-code defaults.
  if (j.contains("detection")) {
    const json& jd = j.at("detection");
    const DetectionPolicy def;
    s.detection.gamma = jd.value("gamma", def.gamma);
    s.detection.min_separation_bins =
        jd.value("min_separation_bins", def.min_separation_bins);
    s.detection.freq_tol_bins = jd.value("freq_tol_bins", def.freq_tol_bins);
    s.detection.smooth_bins = jd.value("smooth_bins", def.smooth_bins);
    s.detection.coverage_frac = jd.value("coverage_frac", def.coverage_frac);
  }
  if (j.contains("baseline")) {
    const json& jb = j.at("baseline");
    const BaselineOptions def;
    s.baseline.ridge_rel = jb.value("ridge_rel", def.ridge_rel);
    s.baseline.cond_limit = jb.value("cond_limit", def.cond_limit);
    s.baseline.trunc_eig_max = jb.value("trunc_eig_max", def.trunc_eig_max);
  }
  s.threads = j.value("threads", 1);
  return s;
}

namespace {

json parse_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return j;
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  require(out.good(), "cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace

SceneConfig load_scene(const std::string& path) {
  try {
    return scene_from_json(parse_file(path));
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void save_scene(const std::string& path, const SceneConfig& scene) {
  write_file(path, to_json(scene));
}

SweepSpec load_sweep(const std::string& path) {
  try {
    return sweep_from_json(parse_file(path));
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void save_sweep(const std::string& path, const SweepSpec& spec) {
  write_file(path, to_json(spec));
}

SimulationOutput simulate_scene(const SceneConfig& scene) {
  require(!scene.signals.empty(), "simulate_scene: no signals");
  std::vector<NyquistGridSignal> parts;
  for (const auto& s : scene.signals) {
    parts.push_back(gen_signal(s, scene.config.grid));
  }
  SimulationOutput out;
  out.clean = mix(parts);
  out.noisy = add_awgn(out.clean, scene.snr_db, scene.seed);
  out.rec = lpf_decimate(rf_sample(out.noisy, pulse_train(scene.config)),
                         scene.config);
  return out;
}

}  // namespace nyfr

// Command line front end for the folding-receiver simulator: generate scenes,
// run the acquisition chain, reconstruct wideband spectra with the fast
// covariance path or the conventional baselines, sweep accuracy over scene
// parameters, and print complexity estimates.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "nyfr/baselines.hpp"
#include "nyfr/detection.hpp"
#include "nyfr/io.hpp"
#include "nyfr/scene.hpp"
#include "nyfr/sweep.hpp"

namespace {

using namespace nyfr;

std::string resolve_out_dir(const std::string& flag_value) {
  std::string dir = flag_value;
  if (dir.empty()) {
    const char* env = std::getenv("NYFR_OUT_DIR");
    dir = env != nullptr ? env : ".";
  }
  std::filesystem::create_directories(dir);
  return dir;
}

SceneConfig resolve_scene(const std::string& scene_path, bool small,
                          bool theta_zero, double snr_override,
                          std::uint64_t seed_override) {
  SceneConfig scene;
  if (!scene_path.empty()) {
    scene = load_scene(scene_path);
  } else {
    scene = small ? default_scene_small() : default_scene();
  }
  if (theta_zero) {
    LoSpec lo = scene.config.lo;
    lo.mod_kind = LoModKind::none;
    scene.config = make_nyfr_config(lo, scene.config.nz_count,
                                    scene.config.harmonic_order, scene.config.grid);
  }
  if (!std::isnan(snr_override)) scene.snr_db = snr_override;
  if (seed_override != 0) scene.seed = seed_override;
  return scene;
}

// Snapshot ensemble for the covariance baselines: the scene's emitters with
// per-snapshot random initial phases and fresh noise.
std::vector<CVec> scene_snapshots(const SceneConfig& scene,
                                  const NyquistGridSignal& pulses,
                                  std::int64_t count) {
  Philox4x32 rng(scene.seed, 7);
  std::vector<CVec> snapshots;
  snapshots.reserve(static_cast<std::size_t>(count));
  for (std::int64_t l = 0; l < count; ++l) {
    std::vector<NyquistGridSignal> parts;
    for (auto s : scene.signals) {
      s.initial_phase_rad = rng.next_double() * kTwoPi;
      parts.push_back(gen_signal(s, scene.config.grid));
    }
    NyquistGridSignal rf = add_awgn(mix(parts), scene.snr_db, scene.seed,
                                    100 + static_cast<std::uint64_t>(l));
    snapshots.push_back(lpf_decimate(rf_sample(rf, pulses), scene.config).samples);
  }
  return snapshots;
}

void print_peaks(const PowerSpectrum& ps, const DetectionPolicy& policy,
                 double adc_rate_hz) {
  const auto peaks = detect_peaks(ps, policy);
  std::cout << "detections (strongest first):\n";
  std::cout << "  freq_ghz   power        zone  folded_ghz\n";
  const std::size_t shown = std::min<std::size_t>(peaks.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& d = peaks[i];
    const std::int64_t zone = nz_index(d.freq_hz, adc_rate_hz);
    const double folded = d.freq_hz - static_cast<double>(zone) * adc_rate_hz;
    std::printf("  %8.4f   %-11.4g  %-4lld  %8.4f\n", d.freq_hz / 1e9, d.power,
                static_cast<long long>(zone), folded / 1e9);
  }
  if (peaks.size() > shown) {
    std::cout << "  ... " << peaks.size() - shown << " more\n";
  }
}

int cmd_simulate(const std::string& scene_path, bool small, bool theta_zero,
                 double snr_override, std::uint64_t seed_override,
                 const std::string& out_flag, std::int64_t stft_win,
                 std::int64_t stft_hop) {
  const SceneConfig scene =
      resolve_scene(scene_path, small, theta_zero, snr_override, seed_override);
  const std::string out = resolve_out_dir(out_flag);

  const SimulationOutput sim = simulate_scene(scene);
  save_scene(out + "/scene.json", scene);
  write_signal(out + "/rf_signal.bin", sim.noisy);
  write_measurement(out + "/measurement", sim.rec);
  const std::int64_t m = sim.rec.config.m_count();
  const std::int64_t win = std::min(stft_win, m);
  write_spectrogram_csv(out + "/spectrogram.csv", sim.rec, win,
                        stft_hop > 0 ? stft_hop : win / 2);

  const NyfrConfig& cfg = scene.config;
  std::cout << "simulated " << scene.signals.size() << " emitter(s): N="
            << cfg.grid.n_samples << " M=" << cfg.m_count()
            << " zones=" << cfg.nz_count << " adc=" << cfg.lo.adc_rate_hz / 1e9
            << " GHz span=[" << cfg.band_start_hz() / 1e9 << ", "
            << cfg.band_stop_hz() / 1e9 << ") GHz\n";
  std::cout << "wrote scene.json, rf_signal.bin, measurement.{bin,json}, "
               "spectrogram.csv in "
            << out << "\n";
  return 0;
}

int cmd_reconstruct(const std::string& scene_path, const std::string& meas_path,
                    bool small, const std::string& method_name,
                    const std::string& window_name, const std::string& reg_name,
                    double eps_rel, std::int64_t snapshots, double snr_override,
                    std::uint64_t seed_override, const std::string& out_flag,
                    const DetectionPolicy& detection, double nufft_tol) {
  const FlopMethod method = flop_method_from_string(method_name);
  const std::string out = resolve_out_dir(out_flag);

  PipelineOptions popts;
  popts.window = lag_window_from_string(window_name);
  popts.policy.mode = reg_mode_from_string(reg_name);
  popts.policy.epsilon_rel = eps_rel;
  popts.nufft.tolerance = nufft_tol;

  PowerSpectrum ps;
  nlohmann::json meta;
  double adc_rate = 0.0;

  if (!meas_path.empty()) {
    require(method == FlopMethod::proposed,
            "reconstruct: baselines need a scene (snapshot ensemble), not a "
            "single measurement");
    MeasurementRecord rec = read_measurement(meas_path);
    adc_rate = rec.config.lo.adc_rate_hz;
    PipelineResult pr = proposed_pipeline(rec, popts);
    ps = std::move(pr.ps);
    meta = {{"measurement", meas_path}, {"nyfr", to_json(rec.config)}};
  } else {
    const SceneConfig scene = resolve_scene(
        scene_path, small, false, snr_override, seed_override);
    adc_rate = scene.config.lo.adc_rate_hz;
    meta = {{"scene", to_json(scene)}, {"method", method_name}};
    if (method == FlopMethod::proposed) {
      const SimulationOutput sim = simulate_scene(scene);
      PipelineResult pr = proposed_pipeline(sim.rec, popts);
      ps = std::move(pr.ps);
    } else {
      require(scene.config.grid.n_samples <= 4096,
              "reconstruct: covariance baselines limited to n_samples <= 4096 "
              "(dense solver); use a reduced scene");
      const NyquistGridSignal pulses = pulse_train(scene.config);
      const std::vector<CVec> snaps = scene_snapshots(scene, pulses, snapshots);
      const Eigen::MatrixXcd a = time_sensing_matrix(scene.config);
      if (method == FlopMethod::time_domain) {
        BaselineResult br = baseline_time_domain(snaps, a);
        ps = baseline_spectrum(br, popts.window, scene.config);
        std::cout << "baseline cond estimate " << br.cond_estimate
                  << (br.truncated ? " (truncated)" : "") << "\n";
      } else {
        const Eigen::MatrixXcd b = freq_sensing_matrix(a, scene.config);
        FreqBaselineResult fr = baseline_freq_domain(snaps, b, scene.config);
        ps = baseline_spectrum(fr);
        std::cout << "baseline cond estimate " << fr.cond_estimate
                  << (fr.truncated ? " (truncated)" : "") << "\n";
      }
    }
  }

  write_spectrum_csv(out + "/spectrum.csv", ps, meta);
  std::cout << "spectrum: " << ps.size() << " bins, "
            << ps.freq_step_hz / 1e6 << " MHz/bin, method "
            << (ps.method.empty() ? method_name : ps.method) << "\n";
  print_peaks(ps, detection, adc_rate);
  std::cout << "wrote spectrum.csv in " << out << "\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, std::int64_t trials_override,
              std::uint64_t seed_override, const std::string& method_override,
              int threads_override, const std::string& out_flag) {
  SweepSpec spec = load_sweep(config_path);
  if (trials_override > 0) spec.trials = trials_override;
  if (seed_override != 0) spec.base_seed = seed_override;
  if (!method_override.empty()) {
    spec.method = flop_method_from_string(method_override);
  }
  if (threads_override > 0) spec.threads = threads_override;
  const std::string out = resolve_out_dir(out_flag);

  const SweepResult result = run_sweep(spec);
  write_sweep_csv(out + "/sweep.csv", result, to_json(spec));
  save_sweep(out + "/sweep.recipe.json", spec);

  std::cout << "axis " << to_string(spec.axis) << ", method "
            << to_string(spec.method) << ":\n";
  for (const auto& p : result.points) {
    std::printf("  %12.6g  ->  %6.2f %%  (%lld/%lld, %lld errors, %.1f ms)\n",
                p.axis_value, p.accuracy_pct,
                static_cast<long long>(p.eligible),
                static_cast<long long>(p.total),
                static_cast<long long>(p.errors), p.wall_ms);
    for (const auto& e : p.error_samples) {
      std::cout << "      error: " << e << "\n";
    }
  }
  std::cout << "wrote sweep.csv, sweep.recipe.json in " << out << "\n";
  return 0;
}

int cmd_flops(std::int64_t n, std::int64_t m, std::int64_t l, std::int64_t k,
              const std::string& method_name, const std::string& csv_path) {
  std::vector<FlopReport> reports;
  if (method_name == "all" || method_name == "proposed") {
    reports.push_back(flop_count(FlopMethod::proposed, n, m, 0, k));
  }
  if (method_name == "all" || method_name == "time_domain") {
    reports.push_back(flop_count(FlopMethod::time_domain, n, m, l));
  }
  if (method_name == "all" || method_name == "freq_domain") {
    reports.push_back(flop_count(FlopMethod::freq_domain, n, m, l));
  }
  require(!reports.empty(), "flops: unknown method " + method_name);

  std::printf("%-12s %8s %6s %6s %6s  %s\n", "method", "n", "m", "l", "k",
              "total_flops");
  for (const auto& r : reports) {
    std::printf("%-12s %8lld %6lld %6lld %6lld  %.4e\n",
                to_string(r.method).c_str(), static_cast<long long>(r.n),
                static_cast<long long>(r.m),
                static_cast<long long>(r.l_snapshots),
                static_cast<long long>(r.sparsity_k), r.total_flops);
  }
  if (!csv_path.empty()) {
    write_flops_csv(csv_path, reports);
    std::cout << "wrote " << csv_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nyquist-folding receiver simulator and wideband power-spectrum "
               "reconstruction"};
  app.require_subcommand(1);

  std::string scene_path, meas_path, out_dir, config_path, csv_path;
  std::string method = "proposed", window = "rect", reg = "zero_fill";
  bool small = false, theta_zero = false;
  double snr = std::nan("");
  double eps_rel = 1e-3, nufft_tol = 1e-7;
  std::uint64_t seed = 0;
  std::int64_t snapshots = 100, trials = 0;
  std::int64_t stft_win = 256, stft_hop = 0;
  std::int64_t fn = 32000, fm = 4000, fl = 100, fk = 10;
  int threads = 0;
  DetectionPolicy detection;

  auto* sim = app.add_subcommand("simulate", "Run the acquisition chain on a scene");
  sim->add_option("--scene", scene_path, "Scene JSON (default: built-in survey scene)");
  sim->add_flag("--small", small, "Use the reduced built-in scene");
  sim->add_flag("--theta-zero", theta_zero, "Disable LO phase modulation");
  sim->add_option("--snr", snr, "Override scene SNR in dB");
  sim->add_option("--seed", seed, "Override scene seed (nonzero)");
  sim->add_option("--out", out_dir, "Output directory (default $NYFR_OUT_DIR or .)");
  sim->add_option("--stft-win", stft_win, "Spectrogram window length");
  sim->add_option("--stft-hop", stft_hop, "Spectrogram hop (default win/2)");

  auto add_recon_flags = [&](CLI::App* cmd) {
    cmd->add_option("--scene", scene_path, "Scene JSON (default: built-in)");
    cmd->add_option("--measurement", meas_path,
                    "Measurement base path (reads <base>.bin + <base>.json)");
    cmd->add_flag("--small", small, "Use the reduced built-in scene");
    cmd->add_option("--window", window, "Lag window: rect|bartlett");
    cmd->add_option("--reg", reg, "Divider regularization: zero_fill|tikhonov");
    cmd->add_option("--eps-rel", eps_rel, "Relative small-divisor floor");
    cmd->add_option("--snapshots", snapshots, "Snapshot count for baselines");
    cmd->add_option("--snr", snr, "Override scene SNR in dB");
    cmd->add_option("--seed", seed, "Override scene seed (nonzero)");
    cmd->add_option("--nufft-tol", nufft_tol, "Fast-transform accuracy target");
    cmd->add_option("--gamma", detection.gamma, "Detection threshold factor");
    cmd->add_option("--out", out_dir, "Output directory (default $NYFR_OUT_DIR or .)");
  };

  auto* rec = app.add_subcommand("reconstruct", "Reconstruct the wideband spectrum");
  rec->add_option("--method", method, "proposed|time_domain|freq_domain");
  add_recon_flags(rec);

  auto* base = app.add_subcommand(
      "baseline", "Reconstruct with the conventional covariance baseline");
  std::string base_method = "time_domain";
  base->add_option("--method", base_method, "time_domain|freq_domain");
  add_recon_flags(base);

  auto* swp = app.add_subcommand("sweep", "Monte Carlo accuracy sweep");
  std::string sweep_method;
  swp->add_option("--config", config_path, "Sweep JSON description")->required();
  swp->add_option("--trials", trials, "Override trial count");
  swp->add_option("--seed", seed, "Override base seed (nonzero)");
  swp->add_option("--method", sweep_method, "Override method");
  swp->add_option("--threads", threads, "Worker threads");
  swp->add_option("--out", out_dir, "Output directory (default $NYFR_OUT_DIR or .)");

  auto* flp = app.add_subcommand("flops", "Closed-form complexity estimates");
  flp->add_option("--n", fn, "Reconstruction grid size");
  flp->add_option("--m", fm, "Measurement length");
  flp->add_option("--l", fl, "Snapshot count");
  flp->add_option("--k", fk, "Assumed spectral occupancy");
  std::string flop_method = "all";
  flp->add_option("--method", flop_method, "all|proposed|time_domain|freq_domain");
  flp->add_option("--csv", csv_path, "Also write a CSV table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Exit-code contract: 0 success (includes --help), 2 usage error.
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) {
      return cmd_simulate(scene_path, small, theta_zero, snr, seed, out_dir,
                          stft_win, stft_hop);
    }
    if (rec->parsed()) {
      return cmd_reconstruct(scene_path, meas_path, small, method, window, reg,
                             eps_rel, snapshots, snr, seed, out_dir, detection,
                             nufft_tol);
    }
    if (base->parsed()) {
      // The reduced scene is the sensible default for the dense baselines.
      const bool use_small = small || scene_path.empty();
      return cmd_reconstruct(scene_path, meas_path, use_small, base_method,
                             window, reg, eps_rel, snapshots, snr, seed, out_dir,
                             detection, nufft_tol);
    }
    if (swp->parsed()) {
      return cmd_sweep(config_path, trials, seed, sweep_method, threads, out_dir);
    }
    if (flp->parsed()) {
      return cmd_flops(fn, fm, fl, fk, flop_method, csv_path);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#pragma once

#include <json.hpp>
#include <limits>
#include <string>
#include <vector>

#include "nyfr/frontend.hpp"
#include "nyfr/sweep.hpp"
#include "nyfr/types.hpp"
#include "nyfr/waveforms.hpp"

namespace nyfr {

// A fully specified simulation input: acquisition chain, emitter list, noise
// level and RNG seed.  Serializes losslessly to JSON so any output can be
// reproduced from its embedded config alone.
struct SceneConfig {
  NyfrConfig config;
  std::vector<SignalSpec> signals;
  double snr_db = std::numeric_limits<double>::infinity();  // +inf = noiseless
  std::uint64_t seed = 1;
};

// Survey-scale demo scene: 8 zones at 4 GHz, three emitters (MP, BPSK, LFM)
// spread over 2-18 GHz at 10 dB SNR.
SceneConfig default_scene();
// Reduced scene sized so the covariance baselines run in seconds.
SceneConfig default_scene_small();

nlohmann::json to_json(const LoSpec& lo);
nlohmann::json to_json(const NyfrConfig& cfg);
nlohmann::json to_json(const SignalSpec& s);
nlohmann::json to_json(const SceneConfig& scene);
nlohmann::json to_json(const SweepScene& s);
nlohmann::json to_json(const SweepSpec& s);

NyfrConfig nyfr_config_from_json(const nlohmann::json& j);
SignalSpec signal_from_json(const nlohmann::json& j);
SceneConfig scene_from_json(const nlohmann::json& j);
SweepSpec sweep_from_json(const nlohmann::json& j);

SceneConfig load_scene(const std::string& path);
void save_scene(const std::string& path, const SceneConfig& scene);
SweepSpec load_sweep(const std::string& path);
void save_sweep(const std::string& path, const SweepSpec& spec);

struct SimulationOutput {
  NyquistGridSignal clean;
  NyquistGridSignal noisy;
  MeasurementRecord rec;
};

// Deterministic end-to-end run of the acquisition chain on a scene.
SimulationOutput simulate_scene(const SceneConfig& scene);

}  // namespace nyfr

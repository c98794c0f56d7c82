#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "nyfr/frontend.hpp"
#include "nyfr/kernels.hpp"
#include "nyfr/reconstruction.hpp"
#include "nyfr/sweep.hpp"
#include "nyfr/types.hpp"
#include "nyfr/waveforms.hpp"

namespace nyfr {

// Identifies the producing build in file headers.
std::string build_id();

// Signal container: one ASCII header line
//   nyfrsig 1 complex128 <count> <sample_rate_hz>
// followed by <count> little-endian float64 (re, im) pairs.
void write_signal(const std::string& path, const NyquistGridSignal& sig);
NyquistGridSignal read_signal(const std::string& path);

// Measurement = <base>.bin (same sample container at the ADC rate) plus
// <base>.json sidecar carrying the chain config; the sample instants are
// derived from the config on load.
void write_measurement(const std::string& base_path, const MeasurementRecord& rec);
MeasurementRecord read_measurement(const std::string& base_path);

// CSV writers.  Every file starts with comment lines carrying the build id
// and a single-line JSON config so results are reproducible from the file
// alone.
void write_spectrum_csv(const std::string& path, const PowerSpectrum& ps,
                        const nlohmann::json& meta);
void write_sweep_csv(const std::string& path, const SweepResult& result,
                     const nlohmann::json& meta);
void write_flops_csv(const std::string& path, const std::vector<FlopReport>& reports);

// Short-time spectrogram of the low-rate measurement (Hann window), columns
// ordered from -adc_rate/2 upward.
void write_spectrogram_csv(const std::string& path, const MeasurementRecord& rec,
                           std::int64_t window, std::int64_t hop);

}  // namespace nyfr

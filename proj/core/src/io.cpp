#include "nyfr/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nyfr/scene.hpp"
#include "nyfr/version.hpp"

namespace nyfr {

using nlohmann::json;

std::string build_id() { return std::string{"nyfr "} + kVersion; }

void write_signal(const std::string& path, const NyquistGridSignal& sig) {
  require(!sig.samples.empty(), "write_signal: empty signal");
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot write " + path);
  char header[128];
  std::snprintf(header, sizeof(header), "nyfrsig 1 complex128 %lld %.17g\n",
                static_cast<long long>(sig.samples.size()), sig.grid.sample_rate_hz);
  out << header;
  static_assert(sizeof(cplx) == 2 * sizeof(double));
  out.write(reinterpret_cast<const char*>(sig.samples.data()),
            static_cast<std::streamsize>(sig.samples.size() * sizeof(cplx)));
  require(out.good(), "short write to " + path);
}

NyquistGridSignal read_signal(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open " + path);
  std::string line;
  std::getline(in, line);
  std::istringstream hdr(line);
  std::string magic, version, fmt;
  long long count = 0;
  double rate = 0.0;
  hdr >> magic >> version >> fmt >> count >> rate;
  require(magic == "nyfrsig" && version == "1" && fmt == "complex128",
          path + ": not a nyfrsig v1 complex128 file");
  require(count > 0 && rate > 0.0, path + ": corrupt header");

  NyquistGridSignal sig;
  sig.grid = make_grid(count, rate);
  sig.samples.resize(static_cast<std::size_t>(count));
  in.read(reinterpret_cast<char*>(sig.samples.data()),
          static_cast<std::streamsize>(sig.samples.size() * sizeof(cplx)));
  require(in.gcount() ==
              static_cast<std::streamsize>(sig.samples.size() * sizeof(cplx)),
          path + ": truncated sample data");
  return sig;
}

void write_measurement(const std::string& base_path, const MeasurementRecord& rec) {
  NyquistGridSignal as_signal;
  as_signal.samples = rec.samples;
  as_signal.grid = make_grid(static_cast<std::int64_t>(rec.samples.size()),
                             rec.config.lo.adc_rate_hz);
  write_signal(base_path + ".bin", as_signal);

  json j{{"format", "nyfrmeas"},
         {"version", 1},
         {"count", rec.samples.size()},
         {"data_file", base_path + ".bin"},
         {"nyfr", to_json(rec.config)},
         {"build", build_id()}};
  std::ofstream out(base_path + ".json");
  require(out.good(), "cannot write " + base_path + ".json");
  out << j.dump(2) << "\n";
}

MeasurementRecord read_measurement(const std::string& base_path) {
  std::ifstream in(base_path + ".json");
  require(in.good(), "cannot open " + base_path + ".json");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument(base_path + ".json: " + e.what());
  }
  require(j.value("format", std::string{}) == "nyfrmeas",
          base_path + ".json: not a measurement sidecar");

  MeasurementRecord rec;
  rec.config = nyfr_config_from_json(j.at("nyfr"));
  NyquistGridSignal sig = read_signal(base_path + ".bin");
  require(static_cast<std::int64_t>(sig.samples.size()) == rec.config.m_count(),
          base_path + ": sample count disagrees with config");
  rec.samples = std::move(sig.samples);
  const std::int64_t m = rec.config.m_count();
  rec.uniform_instants_s.resize(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) {
    rec.uniform_instants_s[static_cast<std::size_t>(i)] =
        static_cast<double>(i) / rec.config.lo.adc_rate_hz;
  }
  rec.nonuniform_instants_s = nonuniform_instants(rec.config, m);
  return rec;
}

namespace {

void write_meta_comments(std::ofstream& out, const json& meta) {
  out << "# " << build_id() << "\n";
  out << "# config: " << meta.dump() << "\n";
}

}  // namespace

void write_spectrum_csv(const std::string& path, const PowerSpectrum& ps,
                        const json& meta) {
  std::ofstream out(path);
  require(out.good(), "cannot write " + path);
  write_meta_comments(out, meta);
  out << "freq_hz,power\n";
  char buf[80];
  for (std::int64_t i = 0; i < ps.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.10g,%.10g\n", ps.freq_of(i),
                  ps.values[static_cast<std::size_t>(i)]);
    out << buf;
  }
  require(out.good(), "short write to " + path);
}

void write_sweep_csv(const std::string& path, const SweepResult& result,
                     const json& meta) {
  std::ofstream out(path);
  require(out.good(), "cannot write " + path);
  write_meta_comments(out, meta);
  out << "axis,value,method,eligible,total,accuracy_pct,errors,mean_flops,wall_ms\n";
  char buf[256];
  for (const auto& p : result.points) {
    std::snprintf(buf, sizeof(buf), "%s,%.10g,%s,%lld,%lld,%.4f,%lld,%.6g,%.3f\n",
                  to_string(result.axis).c_str(), p.axis_value,
                  to_string(result.method).c_str(),
                  static_cast<long long>(p.eligible),
                  static_cast<long long>(p.total), p.accuracy_pct,
                  static_cast<long long>(p.errors), p.mean_flops, p.wall_ms);
    out << buf;
  }
  require(out.good(), "short write to " + path);
}

void write_flops_csv(const std::string& path,
                     const std::vector<FlopReport>& reports) {
  std::ofstream out(path);
  require(out.good(), "cannot write " + path);
  out << "# " << build_id() << "\n";
  out << "method,n,m,l_snapshots,sparsity_k,total_flops\n";
  char buf[160];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof(buf), "%s,%lld,%lld,%lld,%lld,%.6e\n",
                  to_string(r.method).c_str(), static_cast<long long>(r.n),
                  static_cast<long long>(r.m),
                  static_cast<long long>(r.l_snapshots),
                  static_cast<long long>(r.sparsity_k), r.total_flops);
    out << buf;
  }
  require(out.good(), "short write to " + path);
}

void write_spectrogram_csv(const std::string& path, const MeasurementRecord& rec,
                           std::int64_t window, std::int64_t hop) {
  const auto m = static_cast<std::int64_t>(rec.samples.size());
  require(window >= 8 && window <= m, "spectrogram: window must be in [8, M]");
  require(hop >= 1, "spectrogram: hop must be positive");

  std::ofstream out(path);
  require(out.good(), "cannot write " + path);
  out << "# " << build_id() << "\n";
  out << "# stft window=" << window << " hop=" << hop << " hann\n";
  out << "time_s";
  const double fs = rec.config.lo.adc_rate_hz;
  char buf[64];
  for (std::int64_t k = 0; k < window; ++k) {
    const double f = (static_cast<double>(k - window / 2)) * fs /
                     static_cast<double>(window);
    std::snprintf(buf, sizeof(buf), ",p_%.6g", f);
    out << buf;
  }
  out << "\n";

  CVec frame(static_cast<std::size_t>(window));
  for (std::int64_t start = 0; start + window <= m; start += hop) {
    for (std::int64_t k = 0; k < window; ++k) {
      const double w =
          0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(k) /
                               static_cast<double>(window - 1));
      frame[static_cast<std::size_t>(k)] =
          rec.samples[static_cast<std::size_t>(start + k)] * w;
    }
    const CVec spec = fft(frame);
    std::snprintf(buf, sizeof(buf), "%.10g",
                  rec.uniform_instants_s[static_cast<std::size_t>(start)]);
    out << buf;
    for (std::int64_t k = 0; k < window; ++k) {
      // Column order runs from -fs/2 upward; undo the DFT wrap.
      const std::int64_t q = (k - window / 2 + window) % window;
      std::snprintf(buf, sizeof(buf), ",%.6g",
                    std::norm(spec[static_cast<std::size_t>(q)]));
      out << buf;
    }
    out << "\n";
  }
  require(out.good(), "short write to " + path);
}

}  // namespace nyfr

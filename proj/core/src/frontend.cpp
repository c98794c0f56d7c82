#include "nyfr/frontend.hpp"

#include <cmath>

namespace nyfr {

std::string to_string(LoModKind k) {
  switch (k) {
    case LoModKind::none: return "none";
    case LoModKind::sinusoid: return "sinusoid";
  }
  return "unknown";
}

LoModKind lo_mod_kind_from_string(const std::string& s) {
  if (s == "none") return LoModKind::none;
  if (s == "sinusoid") return LoModKind::sinusoid;
  throw std::invalid_argument("unknown LO modulation kind: " + s);
}

double lo_phase(double t_s, const LoSpec& lo) {
  switch (lo.mod_kind) {
    case LoModKind::none:
      return 0.0;
    case LoModKind::sinusoid:
      return lo.mod_amplitude_rad *
             std::sin(kTwoPi * lo.mod_freq_hz * t_s + lo.mod_phase_rad);
  }
  return 0.0;
}

NyfrConfig make_nyfr_config(const LoSpec& lo, std::int64_t nz_count,
                            std::int64_t harmonic_order, const GridSpec& grid) {
  require(lo.adc_rate_hz > 0.0, "NyfrConfig: adc_rate_hz must be positive");
  require(nz_count >= 1, "NyfrConfig: nz_count must be at least 1");
  require(harmonic_order >= 1 && harmonic_order <= nz_count,
          "NyfrConfig: harmonic_order must be in [1, nz_count]");
  require(grid.n_samples > 0, "NyfrConfig: empty grid");
  require(nearly_equal(grid.sample_rate_hz,
                       static_cast<double>(nz_count) * lo.adc_rate_hz),
          "NyfrConfig: grid rate must equal nz_count * adc_rate_hz");
  require(grid.n_samples % nz_count == 0,
          "NyfrConfig: n_samples must be divisible by nz_count");
  require((grid.n_samples / nz_count) % 2 == 0,
          "NyfrConfig: per-zone sample count must be even");
  if (lo.mod_kind == LoModKind::sinusoid) {
    require(lo.mod_amplitude_rad >= 0.0 && lo.mod_freq_hz > 0.0,
            "NyfrConfig: sinusoid modulation needs amplitude >= 0 and freq > 0");
    // Sufficient condition for t - theta(t)/omega_s to stay monotone.
    require(lo.mod_amplitude_rad * lo.mod_freq_hz < lo.adc_rate_hz,
            "NyfrConfig: modulation too fast/deep; warped time not monotone");
  }
  return NyfrConfig{lo, nz_count, harmonic_order, grid};
}

FreqGrid label_grid(const NyfrConfig& cfg) {
  return FreqGrid{cfg.band_start_hz(), cfg.grid.bin_hz(), cfg.grid.n_samples};
}

std::int64_t nz_index(double carrier_hz, double adc_rate_hz) {
  require(adc_rate_hz > 0.0, "nz_index: adc_rate_hz must be positive");
  return std::llround(carrier_hz / adc_rate_hz);
}

NyquistGridSignal pulse_train(const NyfrConfig& cfg) {
  NyquistGridSignal out;
  out.grid = cfg.grid;
  out.samples.assign(static_cast<std::size_t>(cfg.grid.n_samples), cplx{});
  const double ws = cfg.lo.omega_s();
  for (std::int64_t n = 0; n < cfg.grid.n_samples; ++n) {
    const double t = cfg.grid.time_of(n);
    const double base = ws * t + lo_phase(t, cfg.lo);
    cplx acc{0.0, 0.0};
    for (std::int64_t l = 0; l < cfg.harmonic_order; ++l) {
      const double phase = -static_cast<double>(l) * base;
      acc += cplx{std::cos(phase), std::sin(phase)};
    }
    out.samples[static_cast<std::size_t>(n)] = ws * acc;
  }
  return out;
}

NyquistGridSignal rf_sample(const NyquistGridSignal& sig,
                            const NyquistGridSignal& pulses) {
  require(sig.grid == pulses.grid, "rf_sample: grids must match");
  NyquistGridSignal out;
  out.grid = sig.grid;
  out.samples.resize(sig.samples.size());
  for (std::size_t n = 0; n < sig.samples.size(); ++n) {
    out.samples[n] = sig.samples[n] * pulses.samples[n];
  }
  return out;
}

MeasurementRecord lpf_decimate(const NyquistGridSignal& x, const NyfrConfig& cfg) {
  require(x.grid == cfg.grid, "lpf_decimate: signal grid must match config grid");
  const std::int64_t n = cfg.grid.n_samples;
  const std::int64_t m = cfg.m_count();

  // Brickwall low-pass to |f| < adc_rate/2 and decimation in one step: keep
  // the M baseband DFT bins and inverse-transform at the low rate.  The 1/D
  // factor makes this identical to sampling the filtered full-rate signal.
  CVec spec = fft(x.samples);
  CVec kept(static_cast<std::size_t>(m));
  for (std::int64_t q = 0; q < m / 2; ++q) {
    kept[static_cast<std::size_t>(q)] = spec[static_cast<std::size_t>(q)];
  }
  for (std::int64_t q = m / 2; q < m; ++q) {
    kept[static_cast<std::size_t>(q)] = spec[static_cast<std::size_t>(n - m + q)];
  }
  CVec y = ifft(kept);
  const double scale = 1.0 / static_cast<double>(cfg.decimation());
  for (auto& v : y) v *= scale;

  MeasurementRecord rec;
  rec.samples = std::move(y);
  rec.config = cfg;
  rec.uniform_instants_s.resize(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) {
    rec.uniform_instants_s[static_cast<std::size_t>(i)] =
        static_cast<double>(i) / cfg.lo.adc_rate_hz;
  }
  rec.nonuniform_instants_s = nonuniform_instants(cfg, m);
  return rec;
}

std::vector<double> nonuniform_instants(const NyfrConfig& cfg,
                                        std::int64_t m_count) {
  require(m_count > 0, "nonuniform_instants: m_count must be positive");
  std::vector<double> out(static_cast<std::size_t>(m_count));
  const double ws = cfg.lo.omega_s();
  for (std::int64_t i = 0; i < m_count; ++i) {
    const double t = static_cast<double>(i) / cfg.lo.adc_rate_hz;
    out[static_cast<std::size_t>(i)] = t - lo_phase(t, cfg.lo) / ws;
  }
  for (std::int64_t i = 1; i < m_count; ++i) {
    require(out[static_cast<std::size_t>(i)] > out[static_cast<std::size_t>(i - 1)],
            "nonuniform_instants: warped instants are not strictly increasing");
  }
  return out;
}

}  // namespace nyfr

#include "nyfr/reconstruction.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>

namespace nyfr {

SensingMatrixSpec SensingMatrixSpec::from_config(const NyfrConfig& cfg) {
  SensingMatrixSpec spec;
  spec.n = cfg.grid.n_samples;
  spec.m_count = cfg.m_count();
  spec.nz_count = cfg.nz_count;
  spec.harmonic_order = cfg.harmonic_order;
  spec.omega_s = cfg.lo.omega_s();
  spec.theta.resize(static_cast<std::size_t>(spec.m_count));
  for (std::int64_t m = 0; m < spec.m_count; ++m) {
    const double t = static_cast<double>(m) / cfg.lo.adc_rate_hz;
    spec.theta[static_cast<std::size_t>(m)] = lo_phase(t, cfg.lo);
  }
  return spec;
}

void SensingMatrixSpec::validate() const {
  require(n > 0 && m_count > 0 && nz_count > 0, "SensingMatrixSpec: empty sizes");
  require(n == m_count * nz_count, "SensingMatrixSpec: n must equal m_count * nz_count");
  require(harmonic_order >= 1 && harmonic_order <= nz_count,
          "SensingMatrixSpec: harmonic_order must be in [1, nz_count]");
  require(m_count % 2 == 0, "SensingMatrixSpec: m_count must be even");
  require(static_cast<std::int64_t>(theta.size()) == m_count,
          "SensingMatrixSpec: theta must have m_count entries");
  require(omega_s > 0.0, "SensingMatrixSpec: omega_s must be positive");
}

Eigen::MatrixXcd build_sensing_matrix(const SensingMatrixSpec& spec) {
  spec.validate();
  const std::int64_t n = spec.n;
  const std::int64_t mc = spec.m_count;
  require(n <= 16384, "build_sensing_matrix: dense matrix limited to n <= 16384");

  // The low-rate inverse-DFT block is identical for every zone; only the
  // per-sample modulation phase differs.
  Eigen::MatrixXcd block(mc, mc);
  const double scale = spec.omega_s / static_cast<double>(n);
  for (std::int64_t m = 0; m < mc; ++m) {
    for (std::int64_t r = 0; r < mc; ++r) {
      const double ph = kTwoPi * static_cast<double>(r - mc / 2) *
                        static_cast<double>(m) / static_cast<double>(mc);
      block(m, r) = scale * cplx{std::cos(ph), std::sin(ph)};
    }
  }

  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(mc, n);
  for (std::int64_t l = 0; l < spec.harmonic_order; ++l) {
    Eigen::VectorXcd chirp(mc);
    for (std::int64_t m = 0; m < mc; ++m) {
      const double ph = -static_cast<double>(l) * spec.theta[static_cast<std::size_t>(m)];
      chirp(m) = cplx{std::cos(ph), std::sin(ph)};
    }
    a.middleCols(l * mc, mc) = chirp.asDiagonal() * block;
  }
  return a;
}

Eigen::MatrixXcd label_analysis_matrix(const NyfrConfig& cfg) {
  const std::int64_t n = cfg.grid.n_samples;
  const double dt = 1.0 / cfg.grid.sample_rate_hz;
  Eigen::MatrixXcd w(n, n);
  for (std::int64_t i = 0; i < n; ++i) {
    const double fi = cfg.band_start_hz() + static_cast<double>(i) * cfg.grid.bin_hz();
    for (std::int64_t j = 0; j < n; ++j) {
      const double ph = -kTwoPi * fi * static_cast<double>(j) * dt;
      w(i, j) = cplx{std::cos(ph), std::sin(ph)};
    }
  }
  return w;
}

Eigen::MatrixXcd time_sensing_matrix(const NyfrConfig& cfg) {
  const Eigen::MatrixXcd a =
      build_sensing_matrix(SensingMatrixSpec::from_config(cfg));
  return a * label_analysis_matrix(cfg);
}

NyquistGridSignal reconstruct_xhat(const MeasurementRecord& rec, std::int64_t n,
                                   const NufftOptions& nufft) {
  const NyfrConfig& cfg = rec.config;
  require(n == cfg.grid.n_samples,
          "reconstruct_xhat: n must match the config's wideband grid");
  require(static_cast<std::int64_t>(rec.samples.size()) == cfg.m_count(),
          "reconstruct_xhat: measurement length mismatch");
  require(rec.nonuniform_instants_s.size() == rec.samples.size(),
          "reconstruct_xhat: missing warped instants");

  const FreqGrid grid = label_grid(cfg);
  const CVec spectrum =
      nufft_time_to_freq(rec.samples, rec.nonuniform_instants_s, grid, nufft);

  // x[n] = (1/N) sum_i Y_i e^{+j 2 pi (i - M/2) n / N}; rotating the spectrum
  // by M/2 turns this into a plain inverse DFT.
  const std::int64_t mc = cfg.m_count();
  CVec rotated(static_cast<std::size_t>(n));
  for (std::int64_t b = 0; b < n; ++b) {
    rotated[static_cast<std::size_t>(b)] =
        spectrum[static_cast<std::size_t>((b + mc / 2) % n)];
  }
  NyquistGridSignal out;
  out.grid = cfg.grid;
  out.samples = ifft(rotated);
  return out;
}

namespace {

std::mutex g_rp_mutex;
std::map<std::string, AutocorrSeq> g_rp_cache;

std::string rp_cache_key(const NyfrConfig& cfg) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%lld|%lld|%lld|%.17g|%d|%.17g|%.17g|%.17g",
                static_cast<long long>(cfg.grid.n_samples),
                static_cast<long long>(cfg.nz_count),
                static_cast<long long>(cfg.harmonic_order), cfg.lo.adc_rate_hz,
                static_cast<int>(cfg.lo.mod_kind), cfg.lo.mod_amplitude_rad,
                cfg.lo.mod_freq_hz, cfg.lo.mod_phase_rad);
  return buf;
}

}  // namespace

AutocorrSeq pulse_autocorr_ref(const NyfrConfig& cfg) {
  const std::string key = rp_cache_key(cfg);
  {
    std::lock_guard<std::mutex> lock(g_rp_mutex);
    auto it = g_rp_cache.find(key);
    if (it != g_rp_cache.end()) return it->second;
  }
  AutocorrSeq r = autocorr_fft(pulse_train(cfg).samples);
  std::lock_guard<std::mutex> lock(g_rp_mutex);
  g_rp_cache.emplace(key, r);
  return r;
}

AutocorrSeq divide_autocorr(const AutocorrSeq& r_x, const AutocorrSeq& r_p,
                            const RegularizationPolicy& policy) {
  r_x.validate();
  r_p.validate();
  require(r_x.n_ref == r_p.n_ref, "divide_autocorr: lag ranges must match");
  require(policy.epsilon_rel > 0.0, "divide_autocorr: epsilon_rel must be positive");

  double max_p = 0.0;
  for (const auto& v : r_p.lags) max_p = std::max(max_p, std::abs(v));
  require(max_p > 0.0, "divide_autocorr: reference autocorrelation is zero");
  const double floor_abs = policy.epsilon_rel * max_p;

  AutocorrSeq out;
  out.n_ref = r_x.n_ref;
  out.lags.resize(r_x.lags.size());
  for (std::size_t i = 0; i < r_x.lags.size(); ++i) {
    const cplx p = r_p.lags[i];
    if (policy.mode == RegularizationPolicy::Mode::zero_fill) {
      out.lags[i] = std::abs(p) < floor_abs ? cplx{0.0, 0.0} : r_x.lags[i] / p;
    } else {
      out.lags[i] = r_x.lags[i] * std::conj(p) / (std::norm(p) + floor_abs * floor_abs);
    }
  }
  // The ratio of two Hermitian sequences drifts off Hermitian symmetry by
  // rounding; put it back exactly.
  for (std::int64_t k = 0; k <= out.max_lag(); ++k) {
    const cplx h = 0.5 * (out.at(k) + std::conj(out.at(-k)));
    out.at(k) = h;
    out.at(-k) = std::conj(h);
  }
  return out;
}

std::string to_string(LagWindow w) {
  return w == LagWindow::rect ? "rect" : "bartlett";
}

LagWindow lag_window_from_string(const std::string& s) {
  if (s == "rect") return LagWindow::rect;
  if (s == "bartlett") return LagWindow::bartlett;
  throw std::invalid_argument("unknown lag window: " + s);
}

std::string to_string(RegularizationPolicy::Mode m) {
  return m == RegularizationPolicy::Mode::zero_fill ? "zero_fill" : "tikhonov";
}

RegularizationPolicy::Mode reg_mode_from_string(const std::string& s) {
  if (s == "zero_fill") return RegularizationPolicy::Mode::zero_fill;
  if (s == "tikhonov") return RegularizationPolicy::Mode::tikhonov;
  throw std::invalid_argument("unknown regularization mode: " + s);
}

PowerSpectrum power_spectrum(const AutocorrSeq& r_s, LagWindow window,
                             double sample_rate_hz, double band_start_hz) {
  r_s.validate();
  require(sample_rate_hz > 0.0, "power_spectrum: sample_rate_hz must be positive");
  const std::int64_t len = r_s.size();
  const std::int64_t n_ref = r_s.n_ref;

  // Lags in DFT order (non-negative first, then wrapped negatives) so a plain
  // length-(2N-1) FFT evaluates the two-sided transform.
  CVec seq(static_cast<std::size_t>(len), cplx{0.0, 0.0});
  for (std::int64_t k = -(n_ref - 1); k <= n_ref - 1; ++k) {
    double w = 1.0;
    if (window == LagWindow::bartlett) {
      w = 1.0 - std::abs(static_cast<double>(k)) / static_cast<double>(n_ref);
    }
    const std::int64_t idx = k >= 0 ? k : len + k;
    seq[static_cast<std::size_t>(idx)] = w * r_s.at(k);
  }
  const CVec spec = fft(seq);

  const double step = sample_rate_hz / static_cast<double>(len);
  const auto offset = static_cast<std::int64_t>(std::llround(-band_start_hz / step));

  PowerSpectrum ps;
  ps.freq_step_hz = step;
  ps.freq_start_hz = -static_cast<double>(offset) * step;
  ps.values.resize(static_cast<std::size_t>(len));
  double max_re = 0.0;
  double max_im = 0.0;
  for (std::int64_t j = 0; j < len; ++j) {
    const std::int64_t q = ((j - offset) % len + len) % len;
    const cplx v = spec[static_cast<std::size_t>(q)];
    ps.values[static_cast<std::size_t>(j)] = v.real();
    max_re = std::max(max_re, std::abs(v.real()));
    max_im = std::max(max_im, std::abs(v.imag()));
  }
  // A Hermitian lag sequence transforms to a real function; anything beyond
  // rounding noise means the inputs were inconsistent.
  require(max_im <= 1e-6 * std::max(max_re, 1e-300),
          "power_spectrum: non-negligible imaginary residue");
  return ps;
}

PipelineResult proposed_pipeline(const MeasurementRecord& rec,
                                 const PipelineOptions& opts) {
  const NyfrConfig& cfg = rec.config;
  const NyquistGridSignal xhat =
      reconstruct_xhat(rec, cfg.grid.n_samples, opts.nufft);
  const AutocorrSeq r_x = autocorr_fft(xhat.samples);
  const AutocorrSeq r_p = pulse_autocorr_ref(cfg);
  const AutocorrSeq r_s = divide_autocorr(r_x, r_p, opts.policy);

  PipelineResult result;
  result.ps = power_spectrum(r_s, opts.window, cfg.grid.sample_rate_hz,
                             cfg.band_start_hz());
  result.ps.method = "proposed";
  result.flops = flop_count(FlopMethod::proposed, cfg.grid.n_samples,
                            cfg.m_count(), 0, opts.assumed_sparsity);
  return result;
}

}  // namespace nyfr

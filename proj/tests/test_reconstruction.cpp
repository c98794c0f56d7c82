#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "nyfr/reconstruction.hpp"
#include "nyfr/rng.hpp"

using namespace nyfr;

namespace {

// Mid-zone multi-tone scene on exact label bins: the regime where the
// acquisition chain and the linear model agree to rounding error (each zone's
// modulated fold stays inside the baseband brick wall).
struct ToneSet {
  std::vector<std::int64_t> bins;
  std::vector<double> amps;
  std::vector<double> phases;
};

// Test-local synthesis x[t] = sum_tones amp e^{j(2 pi f t + phi)}; the label
// spectrum of this signal is S[bin] = N * amp * e^{j phi}.
CVec synthesize(const ToneSet& tones, const NyfrConfig& cfg) {
  const std::int64_t n = cfg.grid.n_samples;
  CVec x(static_cast<std::size_t>(n), cplx{0.0, 0.0});
  for (std::size_t k = 0; k < tones.bins.size(); ++k) {
    const double f = cfg.band_start_hz() +
                     static_cast<double>(tones.bins[k]) * cfg.grid.bin_hz();
    for (std::int64_t t = 0; t < n; ++t) {
      x[static_cast<std::size_t>(t)] += tones.amps[k] *
          std::polar(1.0, kTwoPi * f * cfg.grid.time_of(t) + tones.phases[k]);
    }
  }
  return x;
}

Eigen::VectorXcd label_spectrum_of(const ToneSet& tones, const NyfrConfig& cfg) {
  const std::int64_t n = cfg.grid.n_samples;
  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(n);
  for (std::size_t k = 0; k < tones.bins.size(); ++k) {
    s(tones.bins[k]) += static_cast<double>(n) *
                        std::polar(tones.amps[k], tones.phases[k]);
  }
  return s;
}

// The acquisition map written out directly from its definition, independent
// of the library's vectorized construction.
Eigen::MatrixXcd sensing_matrix_direct(const NyfrConfig& cfg) {
  const std::int64_t n = cfg.grid.n_samples;
  const std::int64_t mc = cfg.m_count();
  const double ws = cfg.lo.omega_s();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(mc, n);
  for (std::int64_t m = 0; m < mc; ++m) {
    const double t = static_cast<double>(m) / cfg.lo.adc_rate_hz;
    const double theta = lo_phase(t, cfg.lo);
    for (std::int64_t l = 0; l < cfg.harmonic_order; ++l) {
      for (std::int64_t r = 0; r < mc; ++r) {
        const double ph = -static_cast<double>(l) * theta +
                          kTwoPi * static_cast<double>(r - mc / 2) *
                              static_cast<double>(m) / static_cast<double>(mc);
        a(m, l * mc + r) = ws / static_cast<double>(n) *
                           cplx{std::cos(ph), std::sin(ph)};
      }
    }
  }
  return a;
}

double rel_err(const Eigen::VectorXcd& got, const Eigen::VectorXcd& want) {
  return (got - want).norm() / want.norm();
}

Eigen::VectorXcd to_eigen(const CVec& v) {
  return Eigen::Map<const Eigen::VectorXcd>(v.data(),
                                            static_cast<std::int64_t>(v.size()));
}

// f_mod equal to one grid bin keeps the modulation periodic over the record,
// so the folded spectra live on exact bins and the brick wall cuts nothing.
NyfrConfig keystone_config() {
  LoSpec lo;
  lo.adc_rate_hz = 4e9;
  lo.mod_kind = LoModKind::sinusoid;
  lo.mod_amplitude_rad = 2.0;
  lo.mod_freq_hz = 62.5e6;
  return make_nyfr_config(lo, 4, 4, make_grid(256, 16e9));
}

NyfrConfig theta_zero_config() {
  LoSpec lo;
  lo.adc_rate_hz = 4e9;
  lo.mod_kind = LoModKind::none;
  return make_nyfr_config(lo, 4, 4, make_grid(256, 16e9));
}

ToneSet mid_zone_tones(const NyfrConfig& cfg) {
  // One tone per zone, offset a few bins from zone center, away from edges.
  const std::int64_t mc = cfg.m_count();
  ToneSet tones;
  for (std::int64_t l = 0; l < cfg.nz_count; ++l) {
    tones.bins.push_back(l * mc + mc / 2 + 8 - 5 * l);
    tones.amps.push_back(1.0 + 0.2 * static_cast<double>(l));
    tones.phases.push_back(0.7 * static_cast<double>(l) - 0.4);
  }
  return tones;
}

}  // namespace

TEST_CASE("library sensing matrix equals its defining formula") {
  const NyfrConfig cfg = keystone_config();
  const Eigen::MatrixXcd lib =
      build_sensing_matrix(SensingMatrixSpec::from_config(cfg));
  const Eigen::MatrixXcd direct = sensing_matrix_direct(cfg);
  REQUIRE(lib.rows() == direct.rows());
  REQUIRE(lib.cols() == direct.cols());
  CHECK((lib - direct).cwiseAbs().maxCoeff() < 1e-12 * direct.cwiseAbs().maxCoeff());
}

TEST_CASE("sensing matrix spec validation") {
  const NyfrConfig cfg = keystone_config();
  SensingMatrixSpec spec = SensingMatrixSpec::from_config(cfg);
  CHECK_NOTHROW(spec.validate());
  SensingMatrixSpec bad = spec;
  bad.n = spec.n + 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = spec;
  bad.theta.pop_back();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = spec;
  bad.harmonic_order = spec.nz_count + 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("acquisition chain equals the spectral-input model on mid-zone tones") {
  const NyfrConfig cfg = keystone_config();
  const ToneSet tones = mid_zone_tones(cfg);
  const CVec x = synthesize(tones, cfg);
  const Eigen::VectorXcd s = label_spectrum_of(tones, cfg);

  const MeasurementRecord rec =
      lpf_decimate(rf_sample({x, cfg.grid}, pulse_train(cfg)), cfg);
  const Eigen::VectorXcd y_chain = to_eigen(rec.samples);
  const Eigen::VectorXcd y_model = sensing_matrix_direct(cfg) * s;

  CHECK(rel_err(y_chain, y_model) < 1e-6);  // observed ~1e-13
}

TEST_CASE("unmodulated chain equals the time-domain map on arbitrary input") {
  const NyfrConfig cfg = theta_zero_config();
  Philox4x32 g(808, 0);
  CVec x(static_cast<std::size_t>(cfg.grid.n_samples));
  for (auto& v : x) v = g.next_cgauss(1.0);

  const MeasurementRecord rec =
      lpf_decimate(rf_sample({x, cfg.grid}, pulse_train(cfg)), cfg);
  const Eigen::VectorXcd y_chain = to_eigen(rec.samples);
  const Eigen::VectorXcd y_model = time_sensing_matrix(cfg) * to_eigen(x);

  CHECK(rel_err(y_chain, y_model) < 1e-9);
}

TEST_CASE("analysis matrix inverts the label synthesis convention") {
  const NyfrConfig cfg = keystone_config();
  const ToneSet tones = mid_zone_tones(cfg);
  const CVec x = synthesize(tones, cfg);
  const Eigen::VectorXcd s = label_spectrum_of(tones, cfg);

  const Eigen::VectorXcd got = label_analysis_matrix(cfg) * to_eigen(x);
  CHECK(rel_err(got, s) < 1e-9);
}

TEST_CASE("selection matrix maps vec indices to lags") {
  SelectionMatrix sel{4};
  CHECK(sel.vec_count() == 16);
  CHECK(sel.lag_count() == 7);
  CHECK(sel.lag_of(0) == 0);    // (i=0, j=0)
  CHECK(sel.lag_of(1) == 1);    // (i=1, j=0)
  CHECK(sel.lag_of(4) == -1);   // (i=0, j=1)
  CHECK(sel.lag_of(15) == 0);   // (i=3, j=3)
  CHECK(sel.lag_of(3) == 3);
  CHECK(sel.lag_of(12) == -3);
}

TEST_CASE("warped-time lift undoes a single-zone chain exactly") {
  // nz = 1 makes the chain a plain (scaled) pass-through, pinning every gain
  // factor in the lift: y = omega_s x implies xhat = omega_s x.
  LoSpec lo;
  lo.adc_rate_hz = 4e9;
  lo.mod_kind = LoModKind::none;
  const NyfrConfig cfg = make_nyfr_config(lo, 1, 1, make_grid(256, 4e9));

  ToneSet tones;
  tones.bins = {40, 130, 200};
  tones.amps = {1.0, 0.5, 0.25};
  tones.phases = {0.1, -1.2, 2.0};
  const CVec x = synthesize(tones, cfg);

  const MeasurementRecord rec =
      lpf_decimate(rf_sample({x, cfg.grid}, pulse_train(cfg)), cfg);
  const NyquistGridSignal xhat = reconstruct_xhat(rec, cfg.grid.n_samples);

  const double ws = cfg.lo.omega_s();
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    worst = std::max(worst, std::abs(xhat.samples[i] - ws * x[i]));
  }
  CHECK(worst < 1e-6 * ws);
}

TEST_CASE("modulated lift localizes a tone from any zone at its true label") {
  // One tone at a time: replicas of a single tone in other zones carry
  // harmonic-mismatch weights well below one, so the global argmax of the
  // lifted spectrum identifies both the zone and the in-zone bin.
  const NyfrConfig cfg = keystone_config();
  const Eigen::MatrixXcd w = label_analysis_matrix(cfg);
  const ToneSet all = mid_zone_tones(cfg);
  for (std::size_t k = 0; k < all.bins.size(); ++k) {
    ToneSet one;
    one.bins = {all.bins[k]};
    one.amps = {1.0};
    one.phases = {all.phases[k]};
    const CVec x = synthesize(one, cfg);
    const MeasurementRecord rec =
        lpf_decimate(rf_sample({x, cfg.grid}, pulse_train(cfg)), cfg);

    const NyquistGridSignal xhat = reconstruct_xhat(rec, cfg.grid.n_samples);
    const Eigen::VectorXcd s_hat = w * to_eigen(xhat.samples);

    std::int64_t best = 0;
    for (std::int64_t i = 1; i < s_hat.size(); ++i) {
      if (std::abs(s_hat(i)) > std::abs(s_hat(best))) best = i;
    }
    CHECK(best == one.bins[0]);
  }
}

TEST_CASE("reconstruct_xhat validates its inputs") {
  const NyfrConfig cfg = keystone_config();
  const ToneSet tones = mid_zone_tones(cfg);
  const CVec x = synthesize(tones, cfg);
  MeasurementRecord rec =
      lpf_decimate(rf_sample({x, cfg.grid}, pulse_train(cfg)), cfg);

  CHECK_THROWS_AS(reconstruct_xhat(rec, cfg.grid.n_samples * 2),
                  std::invalid_argument);
  MeasurementRecord no_instants = rec;
  no_instants.nonuniform_instants_s.clear();
  CHECK_THROWS_AS(reconstruct_xhat(no_instants, cfg.grid.n_samples),
                  std::invalid_argument);
}

TEST_CASE("pulse autocorrelation reference equals a fresh computation") {
  const NyfrConfig cfg = keystone_config();
  const AutocorrSeq direct = autocorr_fft(pulse_train(cfg).samples);
  const AutocorrSeq cached1 = pulse_autocorr_ref(cfg);
  const AutocorrSeq cached2 = pulse_autocorr_ref(cfg);  // memoized path
  REQUIRE(cached1.size() == direct.size());
  for (std::int64_t i = 0; i < direct.size(); ++i) {
    CHECK(cached1.lags[static_cast<std::size_t>(i)] ==
          direct.lags[static_cast<std::size_t>(i)]);
    CHECK(cached2.lags[static_cast<std::size_t>(i)] ==
          direct.lags[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("multiply-then-divide lag round trip") {
  const NyfrConfig cfg = keystone_config();
  const AutocorrSeq r_p = pulse_autocorr_ref(cfg);

  // A synthetic Hermitian target sequence with smooth decay.
  AutocorrSeq r_s;
  r_s.n_ref = r_p.n_ref;
  r_s.lags.resize(r_p.lags.size());
  for (std::int64_t k = -(r_s.n_ref - 1); k <= r_s.n_ref - 1; ++k) {
    const double decay =
        std::exp(-std::abs(static_cast<double>(k)) / 40.0);
    r_s.at(k) = decay * std::polar(1.0, 0.013 * static_cast<double>(k));
  }

  AutocorrSeq r_x;
  r_x.n_ref = r_p.n_ref;
  r_x.lags.resize(r_p.lags.size());
  for (std::size_t i = 0; i < r_x.lags.size(); ++i) {
    r_x.lags[i] = r_s.lags[i] * r_p.lags[i];
  }

  RegularizationPolicy policy;
  policy.mode = RegularizationPolicy::Mode::zero_fill;
  policy.epsilon_rel = 1e-3;
  const AutocorrSeq back = divide_autocorr(r_x, r_p, policy);

  double max_p = 0.0;
  for (const auto& v : r_p.lags) max_p = std::max(max_p, std::abs(v));
  double worst = 0.0;
  std::int64_t kept = 0;
  for (std::int64_t k = -(r_s.n_ref - 1); k <= r_s.n_ref - 1; ++k) {
    if (std::abs(r_p.at(k)) < policy.epsilon_rel * max_p) {
      CHECK(back.at(k) == cplx{0.0, 0.0});
      continue;
    }
    worst = std::max(worst, std::abs(back.at(k) - r_s.at(k)));
    ++kept;
  }
  CHECK(kept > r_s.size() / 2);
  CHECK(worst < 1e-8);
}

TEST_CASE("tikhonov division shrinks towards zero only near the floor") {
  AutocorrSeq r_p;
  r_p.n_ref = 3;
  r_p.lags = {cplx{1e-9, 0}, cplx{0.5, 0}, cplx{2.0, 0}, cplx{0.5, 0},
              cplx{1e-9, 0}};
  AutocorrSeq r_x = r_p;
  for (auto& v : r_x.lags) v *= 3.0;

  RegularizationPolicy policy;
  policy.mode = RegularizationPolicy::Mode::tikhonov;
  policy.epsilon_rel = 1e-3;
  const AutocorrSeq out = divide_autocorr(r_x, r_p, policy);
  // Well-conditioned lags recover the ratio; tiny ones are damped far below it.
  CHECK(std::abs(out.at(0) - cplx{3.0, 0.0}) < 1e-5);
  CHECK(std::abs(out.at(1) - cplx{3.0, 0.0}) < 1e-4);
  CHECK(std::abs(out.at(2)) < 2.0);

  AutocorrSeq mismatched = r_x;
  mismatched.n_ref = 2;
  mismatched.lags.resize(3);
  CHECK_THROWS_AS(divide_autocorr(mismatched, r_p, policy), std::invalid_argument);
}

TEST_CASE("power spectrum of a unit-lag impulse is flat") {
  AutocorrSeq r;
  r.n_ref = 64;
  r.lags.assign(127, cplx{0.0, 0.0});
  r.at(0) = cplx{2.5, 0.0};
  const PowerSpectrum ps = power_spectrum(r, LagWindow::rect, 1e9, -0.5e9);
  REQUIRE(ps.size() == 127);
  for (std::int64_t i = 0; i < ps.size(); ++i) {
    CHECK(ps.values[static_cast<std::size_t>(i)] == doctest::Approx(2.5).epsilon(1e-9));
  }
  CHECK(ps.freq_step_hz == doctest::Approx(1e9 / 127.0));
  // Band start snaps to the nearest transform bin of the requested band edge
  // (a half-bin tie is allowed to round either way).
  CHECK(std::abs(ps.freq_start_hz - (-0.5e9)) <= ps.freq_step_hz * 0.5000001);
}

TEST_CASE("power spectrum of a tone autocorrelation peaks at the tone") {
  const double rate = 1e9;
  const std::int64_t n = 256;
  const double f0 = 200e6;
  CVec x(static_cast<std::size_t>(n));
  for (std::int64_t t = 0; t < n; ++t) {
    x[static_cast<std::size_t>(t)] =
        std::polar(1.0, kTwoPi * f0 * static_cast<double>(t) / rate);
  }
  const AutocorrSeq r = autocorr_fft(x);
  const PowerSpectrum ps = power_spectrum(r, LagWindow::bartlett, rate, -0.5e9);
  std::int64_t best = 0;
  for (std::int64_t i = 1; i < ps.size(); ++i) {
    if (ps.values[static_cast<std::size_t>(i)] >
        ps.values[static_cast<std::size_t>(best)]) {
      best = i;
    }
  }
  CHECK(std::abs(ps.freq_of(best) - f0) <= ps.freq_step_hz);
}

TEST_CASE("proposed pipeline finds a tone from any zone and reports its cost") {
  // Several modulation cycles per record: harmonic contrast in the lag domain
  // needs repetition, a single cycle leaves zone replicas near full strength.
  LoSpec lo;
  lo.adc_rate_hz = 4e9;
  lo.mod_kind = LoModKind::sinusoid;
  lo.mod_amplitude_rad = 2.0;
  lo.mod_freq_hz = 62.5e6;  // 4 cycles over the 64 ns record
  const NyfrConfig cfg = make_nyfr_config(lo, 4, 4, make_grid(1024, 16e9));
  const ToneSet all = mid_zone_tones(cfg);
  for (std::size_t k = 0; k < all.bins.size(); ++k) {
    ToneSet one;
    one.bins = {all.bins[k]};
    one.amps = {1.0};
    one.phases = {all.phases[k]};
    const CVec x = synthesize(one, cfg);
    const MeasurementRecord rec =
        lpf_decimate(rf_sample({x, cfg.grid}, pulse_train(cfg)), cfg);

    PipelineOptions opts;
    const PipelineResult result = proposed_pipeline(rec, opts);
    CHECK(result.ps.method == "proposed");
    CHECK(result.flops.method == FlopMethod::proposed);
    CHECK(result.flops.total_flops > 0.0);

    const double truth = cfg.band_start_hz() +
                         static_cast<double>(one.bins[0]) * cfg.grid.bin_hz();
    std::int64_t best = 0;
    for (std::int64_t i = 1; i < result.ps.size(); ++i) {
      if (result.ps.values[static_cast<std::size_t>(i)] >
          result.ps.values[static_cast<std::size_t>(best)]) {
        best = i;
      }
    }
    CHECK(std::abs(best - result.ps.bin_of(truth)) <= 2);
  }
}

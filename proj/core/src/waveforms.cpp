#include "nyfr/waveforms.hpp"

#include <cmath>

#include "nyfr/rng.hpp"

namespace nyfr {

namespace {

void check_common(const SignalSpec& spec, const GridSpec& grid) {
  require(grid.n_samples > 0 && grid.sample_rate_hz > 0.0,
          "gen_signal: invalid grid");
  require(std::isfinite(spec.carrier_hz) &&
              std::abs(spec.carrier_hz) < grid.sample_rate_hz,
          "gen_signal: carrier_hz outside the representable band");
  require(spec.amplitude > 0.0, "gen_signal: amplitude must be positive");
  require(spec.pulse_len_s > 0.0, "gen_signal: pulse_len_s must be positive");
  require(spec.start_time_s >= 0.0, "gen_signal: start_time_s must be non-negative");
  require(spec.start_time_s + spec.pulse_len_s <=
              grid.duration_s() * (1.0 + 1e-12),
          "gen_signal: pulse window extends past the record");
}

// Fills samples inside [start, start+len) using phase_of(rel_time).
template <typename PhaseFn>
NyquistGridSignal fill_pulse(const SignalSpec& spec, const GridSpec& grid,
                             PhaseFn&& phase_of) {
  NyquistGridSignal out;
  out.grid = grid;
  out.samples.assign(static_cast<std::size_t>(grid.n_samples), cplx{0.0, 0.0});
  const double dt = grid.dt_s();
  auto first = static_cast<std::int64_t>(std::ceil(spec.start_time_s / dt - 1e-9));
  if (first < 0) first = 0;
  const double t_end = spec.start_time_s + spec.pulse_len_s;
  for (std::int64_t n = first; n < grid.n_samples; ++n) {
    const double t = grid.time_of(n);
    if (t >= t_end - 1e-9 * dt) break;
    const double phase = phase_of(t - spec.start_time_s);
    out.samples[static_cast<std::size_t>(n)] =
        spec.amplitude * cplx{std::cos(phase), std::sin(phase)};
  }
  return out;
}

}  // namespace

std::string to_string(SignalKind k) {
  switch (k) {
    case SignalKind::mp: return "mp";
    case SignalKind::bpsk: return "bpsk";
    case SignalKind::lfm: return "lfm";
  }
  return "unknown";
}

SignalKind signal_kind_from_string(const std::string& s) {
  if (s == "mp") return SignalKind::mp;
  if (s == "bpsk") return SignalKind::bpsk;
  if (s == "lfm") return SignalKind::lfm;
  throw std::invalid_argument("unknown signal kind: " + s);
}

NyquistGridSignal gen_mp(const SignalSpec& spec, const GridSpec& grid) {
  check_common(spec, grid);
  const double w = kTwoPi * spec.carrier_hz;
  return fill_pulse(spec, grid, [&](double rel) {
    return w * rel + spec.initial_phase_rad;
  });
}

NyquistGridSignal gen_bpsk(const SignalSpec& spec, const GridSpec& grid) {
  check_common(spec, grid);
  require(spec.symbol_rate_hz > 0.0, "gen_bpsk: symbol_rate_hz must be positive");
  require(!spec.code.empty(), "gen_bpsk: code must be non-empty");
  for (char c : spec.code) {
    require(c == '0' || c == '1', "gen_bpsk: code must contain only '0'/'1'");
  }
  const double w = kTwoPi * spec.carrier_hz;
  const auto code_len = static_cast<std::int64_t>(spec.code.size());
  return fill_pulse(spec, grid, [&](double rel) {
    auto chip = static_cast<std::int64_t>(std::floor(rel * spec.symbol_rate_hz));
    chip %= code_len;
    const double flip = spec.code[static_cast<std::size_t>(chip)] == '1' ? kPi : 0.0;
    return w * rel + flip + spec.initial_phase_rad;
  });
}

NyquistGridSignal gen_lfm(const SignalSpec& spec, const GridSpec& grid) {
  check_common(spec, grid);
  require(spec.bandwidth_hz >= 0.0, "gen_lfm: bandwidth_hz must be non-negative");
  require(std::abs(spec.carrier_hz) + spec.bandwidth_hz / 2.0 < grid.sample_rate_hz,
          "gen_lfm: swept band leaves the representable band");
  // Sweep is centred on the carrier: instantaneous frequency runs from
  // carrier - B/2 to carrier + B/2 across the pulse.
  const double rate = spec.bandwidth_hz / spec.pulse_len_s;
  const double f_lo = spec.carrier_hz - spec.bandwidth_hz / 2.0;
  return fill_pulse(spec, grid, [&](double rel) {
    return kTwoPi * (f_lo * rel + 0.5 * rate * rel * rel) + spec.initial_phase_rad;
  });
}

NyquistGridSignal gen_signal(const SignalSpec& spec, const GridSpec& grid) {
  switch (spec.kind) {
    case SignalKind::mp: return gen_mp(spec, grid);
    case SignalKind::bpsk: return gen_bpsk(spec, grid);
    case SignalKind::lfm: return gen_lfm(spec, grid);
  }
  throw std::invalid_argument("gen_signal: unknown kind");
}

NyquistGridSignal mix(const std::vector<NyquistGridSignal>& parts) {
  require(!parts.empty(), "mix: need at least one signal");
  NyquistGridSignal out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    require(parts[i].grid == out.grid, "mix: signals must share one grid");
    for (std::size_t n = 0; n < out.samples.size(); ++n) {
      out.samples[n] += parts[i].samples[n];
    }
  }
  return out;
}

NyquistGridSignal add_awgn(const NyquistGridSignal& sig, double snr_db,
                           std::uint64_t seed, std::uint64_t stream) {
  if (std::isinf(snr_db) && snr_db > 0.0) return sig;
  require(std::isfinite(snr_db), "add_awgn: snr_db must be finite or +inf");

  double power = 0.0;
  std::int64_t on_count = 0;
  for (const auto& v : sig.samples) {
    const double p = std::norm(v);
    if (p > 0.0) {
      power += p;
      ++on_count;
    }
  }
  require(on_count > 0, "add_awgn: signal is identically zero; SNR undefined");
  power /= static_cast<double>(on_count);

  const double noise_var = power / std::pow(10.0, snr_db / 10.0);
  Philox4x32 rng(seed, stream);
  NyquistGridSignal out = sig;
  for (auto& v : out.samples) {
    v += rng.next_cgauss(noise_var);
  }
  return out;
}

}  // namespace nyfr

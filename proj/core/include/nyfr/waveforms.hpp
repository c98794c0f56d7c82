#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nyfr/types.hpp"

namespace nyfr {

enum class SignalKind { mp, bpsk, lfm };

std::string to_string(SignalKind k);
SignalKind signal_kind_from_string(const std::string& s);

// One emitter.  kind selects which of the optional fields are meaningful:
// bpsk uses symbol_rate_hz + code, lfm uses bandwidth_hz (swept symmetrically
// about carrier_hz).  Times are absolute record times.
struct SignalSpec {
  SignalKind kind = SignalKind::mp;
  double carrier_hz = 0.0;
  double amplitude = 1.0;
  double initial_phase_rad = 0.0;
  double start_time_s = 0.0;
  double pulse_len_s = 0.0;
  double symbol_rate_hz = 0.0;  // bpsk
  std::string code;             // bpsk chip pattern of '0'/'1', cycled
  double bandwidth_hz = 0.0;    // lfm total sweep width
};

// Complex baseband-free ("analytic") samples on a uniform Nyquist-rate grid.
struct NyquistGridSignal {
  CVec samples;
  GridSpec grid;
};

NyquistGridSignal gen_mp(const SignalSpec& spec, const GridSpec& grid);
NyquistGridSignal gen_bpsk(const SignalSpec& spec, const GridSpec& grid);
NyquistGridSignal gen_lfm(const SignalSpec& spec, const GridSpec& grid);
// Dispatch on spec.kind.
NyquistGridSignal gen_signal(const SignalSpec& spec, const GridSpec& grid);

// Coherent sum; all parts must share one grid.
NyquistGridSignal mix(const std::vector<NyquistGridSignal>& parts);

// Additive circular complex white noise.  SNR is defined against the in-pulse
// signal power (mean |s|^2 over the samples where the signal is on), and the
// noise covers the whole record.  snr_db = +infinity returns the input
// unchanged; a finite SNR on an all-zero signal is rejected.
NyquistGridSignal add_awgn(const NyquistGridSignal& sig, double snr_db,
                           std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace nyfr

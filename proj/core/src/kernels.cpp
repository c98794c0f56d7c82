#include "nyfr/kernels.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace nyfr {

namespace {

// FFTW plan creation is not thread-safe; execution on distinct buffers is.
// Plans are cached per (length, direction) and created with FFTW_UNALIGNED so
// they can run on any std::vector storage.
std::mutex g_plan_mutex;
std::map<std::pair<std::int64_t, int>, fftw_plan> g_plans;

fftw_plan plan_for(std::int64_t n, int sign) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto key = std::make_pair(n, sign);
  auto it = g_plans.find(key);
  if (it != g_plans.end()) return it->second;
  CVec in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
  fftw_plan p = fftw_plan_dft_1d(
      static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
      reinterpret_cast<fftw_complex*>(out.data()), sign,
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  require(p != nullptr, "fft: plan creation failed");
  g_plans.emplace(key, p);
  return p;
}

CVec run_plan(const CVec& x, int sign) {
  require(!x.empty(), "fft: input must be non-empty");
  const auto n = static_cast<std::int64_t>(x.size());
  fftw_plan p = plan_for(n, sign);
  CVec in = x;  // fftw_execute_dft may scribble on the input buffer
  CVec out(x.size());
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

CVec fft(const CVec& x) { return run_plan(x, FFTW_FORWARD); }

CVec ifft(const CVec& x) {
  CVec out = run_plan(x, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(x.size());
  for (auto& v : out) v *= scale;
  return out;
}

std::int64_t next_fast_size(std::int64_t n) {
  require(n > 0, "next_fast_size: n must be positive");
  while (true) {
    std::int64_t r = n;
    while (r % 2 == 0) r /= 2;
    while (r % 3 == 0) r /= 3;
    while (r % 5 == 0) r /= 5;
    if (r == 1) return n;
    ++n;
  }
}

std::int64_t FreqGrid::bin_of(double f_hz) const {
  require(step_hz > 0.0, "FreqGrid: step_hz must be positive");
  return static_cast<std::int64_t>(std::llround((f_hz - start_hz) / step_hz));
}

void AutocorrSeq::validate() const {
  require(n_ref > 0, "AutocorrSeq: n_ref must be positive");
  require(size() == 2 * n_ref - 1, "AutocorrSeq: length must be 2*n_ref-1");
}

AutocorrSeq autocorr_fft(const CVec& x) {
  require(!x.empty(), "autocorr_fft: input must be non-empty");
  const auto n = static_cast<std::int64_t>(x.size());
  const std::int64_t len = 2 * n - 1;
  // Zero padding to at least 2N-1 makes the circular correlation linear; any
  // extra padding only adds zeros, so a fast transform length is free.
  const std::int64_t nfft = next_fast_size(len);
  CVec padded(static_cast<std::size_t>(nfft), cplx{0.0, 0.0});
  std::copy(x.begin(), x.end(), padded.begin());
  CVec spec = fft(padded);
  for (auto& v : spec) v = cplx{std::norm(v), 0.0};
  CVec corr = ifft(spec);

  AutocorrSeq out;
  out.n_ref = n;
  out.lags.resize(static_cast<std::size_t>(len));
  const double scale = 1.0 / static_cast<double>(n);
  for (std::int64_t k = 0; k < n; ++k) {
    out.at(k) = corr[static_cast<std::size_t>(k)] * scale;
  }
  for (std::int64_t k = 1; k < n; ++k) {
    out.at(-k) = corr[static_cast<std::size_t>(nfft - k)] * scale;
  }
  return out;
}

std::string to_string(FlopMethod m) {
  switch (m) {
    case FlopMethod::proposed: return "proposed";
    case FlopMethod::time_domain: return "time_domain";
    case FlopMethod::freq_domain: return "freq_domain";
  }
  return "unknown";
}

FlopMethod flop_method_from_string(const std::string& s) {
  if (s == "proposed") return FlopMethod::proposed;
  if (s == "time_domain") return FlopMethod::time_domain;
  if (s == "freq_domain") return FlopMethod::freq_domain;
  throw std::invalid_argument("unknown method: " + s);
}

FlopReport flop_count(FlopMethod method, std::int64_t n, std::int64_t m,
                      std::int64_t l_snapshots, std::int64_t sparsity_k) {
  require(n > 0, "flop_count: n must be positive");
  const double dn = static_cast<double>(n);
  const double lg_n = std::log2(dn);
  const double lg_2n1 = std::log2(2.0 * dn - 1.0);
  FlopReport rep;
  rep.method = method;
  rep.n = n;
  rep.m = m;
  rep.l_snapshots = l_snapshots;
  rep.sparsity_k = sparsity_k;
  switch (method) {
    case FlopMethod::proposed: {
      require(sparsity_k >= 0, "flop_count: sparsity_k must be non-negative");
      const double k = static_cast<double>(sparsity_k);
      rep.total_flops = (k + 1.0) * dn * lg_n + (6.0 * dn - 3.0) * lg_2n1 + (2.0 * dn - 1.0);
      break;
    }
    case FlopMethod::time_domain: {
      require(m > 0 && l_snapshots > 0,
              "flop_count: time_domain needs m and l_snapshots");
      const double dm = static_cast<double>(m);
      const double dl = static_cast<double>(l_snapshots);
      rep.total_flops = dl * dm * dm + dn * dm * dm + (2.0 * dn - 1.0) * lg_2n1;
      break;
    }
    case FlopMethod::freq_domain: {
      require(m > 0 && l_snapshots > 0,
              "flop_count: freq_domain needs m and l_snapshots");
      const double dm = static_cast<double>(m);
      const double dl = static_cast<double>(l_snapshots);
      rep.total_flops = dm * std::log2(dm) + dl * dm * dm + dn * dm * dm;
      break;
    }
  }
  return rep;
}

}  // namespace nyfr

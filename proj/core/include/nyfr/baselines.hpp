#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "nyfr/kernels.hpp"
#include "nyfr/reconstruction.hpp"
#include "nyfr/types.hpp"

namespace nyfr {

// Conventional compressive covariance sensing baselines: estimate the M x M
// measurement covariance from L snapshots and invert the structured linear
// map that relates it to the wideband signal's second-order statistics.
//
// Every `a` below is the time-domain acquisition map (time_sensing_matrix):
// rows are measurements, columns are wideband time samples.  The lag algebra
// (T_k shift matrices, autocorrelation right-hand sides) is built on that
// column ordering; passing the spectral-input matrix silently misaligns the
// Toeplitz basis and yields stable but meaningless solutions.

struct BaselineOptions {
  // Tikhonov level relative to the largest Gram diagonal.  The lag Gram is
  // ill-conditioned at realistic sizes (condition ~1e10 at N = 2048), so a
  // meaningful ridge is the default; it costs sub-bin bias on strong lines and
  // buys a usable solve where a near-zero ridge returns noise.
  double ridge_rel = 1e-5;
  double cond_limit = 1e8;         // beyond this, fall back to truncation
  std::int64_t trunc_eig_max = 1200;  // eigendecomposition fallback cap (lag count)
};

// ---------------------------------------------------------------------------
// Time-domain baseline (lag parameterization)
// ---------------------------------------------------------------------------

// Precomputed solver state for a fixed sensing matrix; building it is the
// expensive part (Gram of the 2N-1 lag columns plus a Cholesky factor), so
// sweeps reuse it across trials.
struct TimeBaselineContext {
  Eigen::MatrixXcd a;  // M x N
  std::int64_t n = 0;
  std::int64_t m_count = 0;
  Eigen::LLT<Eigen::MatrixXcd> llt;   // factor of Gram + ridge
  bool truncated = false;             // eigendecomposition fallback engaged
  Eigen::MatrixXcd trunc_vecs;
  Eigen::VectorXd trunc_inv_vals;
  double cond_estimate = 0.0;
};

TimeBaselineContext make_time_baseline_context(const Eigen::MatrixXcd& a,
                                               const BaselineOptions& opts = {});

struct BaselineResult {
  AutocorrSeq r_s;
  double cond_estimate = 0.0;
  bool truncated = false;
  FlopReport flops;
};

BaselineResult baseline_time_domain_with(const TimeBaselineContext& ctx,
                                         const std::vector<CVec>& snapshots);

// One-shot convenience: build the context and solve.
BaselineResult baseline_time_domain(const std::vector<CVec>& snapshots,
                                    const Eigen::MatrixXcd& a,
                                    const BaselineOptions& opts = {});

// ---------------------------------------------------------------------------
// Frequency-domain baseline (per-label power parameterization)
// ---------------------------------------------------------------------------

// B relates label-spectrum coefficients to the DFT of the measurement:
// B = F_M * A_t * Wlabel^{-1} for the time-domain map A_t, so snapshot
// spectra obey y_tilde = B S.
Eigen::MatrixXcd freq_sensing_matrix(const Eigen::MatrixXcd& a,
                                     const NyfrConfig& cfg);

struct FreqBaselineContext {
  Eigen::MatrixXcd b;  // M x N
  std::int64_t n = 0;
  std::int64_t m_count = 0;
  Eigen::LDLT<Eigen::MatrixXd> ldlt;  // factor of |B^H B|^2 Gram + ridge
  bool truncated = false;
  Eigen::MatrixXd trunc_vecs;
  Eigen::VectorXd trunc_inv_vals;
  double cond_estimate = 0.0;
};

FreqBaselineContext make_freq_baseline_context(const Eigen::MatrixXcd& b,
                                               const BaselineOptions& opts = {});

struct FreqBaselineResult {
  std::vector<double> values;  // per-label power on the label grid
  FreqGrid grid;
  double cond_estimate = 0.0;
  bool truncated = false;
  FlopReport flops;
};

FreqBaselineResult baseline_freq_domain_with(const FreqBaselineContext& ctx,
                                             const std::vector<CVec>& snapshots,
                                             const NyfrConfig& cfg);

FreqBaselineResult baseline_freq_domain(const std::vector<CVec>& snapshots,
                                        const Eigen::MatrixXcd& b,
                                        const NyfrConfig& cfg,
                                        const BaselineOptions& opts = {});

// Lag-domain result mapped to a spectrum for detection, same transform as the
// proposed path.
PowerSpectrum baseline_spectrum(const BaselineResult& res, LagWindow window,
                                const NyfrConfig& cfg);
PowerSpectrum baseline_spectrum(const FreqBaselineResult& res);

}  // namespace nyfr

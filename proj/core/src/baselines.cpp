#include "nyfr/baselines.hpp"

#include <cmath>
#include <functional>

namespace nyfr {

namespace {

// ---------------------------------------------------------------------------
// 2-D FFT helpers (flat row-major lf x lf buffers)
// ---------------------------------------------------------------------------

void fft2_inplace(CVec& data, std::int64_t lf, bool inverse) {
  CVec line(static_cast<std::size_t>(lf));
  for (std::int64_t r = 0; r < lf; ++r) {
    auto* row = data.data() + r * lf;
    std::copy(row, row + lf, line.begin());
    CVec tr = inverse ? ifft(line) : fft(line);
    std::copy(tr.begin(), tr.end(), row);
  }
  for (std::int64_t c = 0; c < lf; ++c) {
    for (std::int64_t r = 0; r < lf; ++r) {
      line[static_cast<std::size_t>(r)] = data[static_cast<std::size_t>(r * lf + c)];
    }
    CVec tr = inverse ? ifft(line) : fft(line);
    for (std::int64_t r = 0; r < lf; ++r) {
      data[static_cast<std::size_t>(r * lf + c)] = tr[static_cast<std::size_t>(r)];
    }
  }
}

// Gram of the lag columns without forming them: with P = A^H A,
//   H[k,k'] = tr(T_{-k} P T_{k'} P) = sum_{u,v} P[u,v] P^T[u-k, v-k'],
// a 2-D cross-correlation evaluated with padded FFTs.
Eigen::MatrixXcd lag_gram(const Eigen::MatrixXcd& a) {
  const std::int64_t n = a.cols();
  const Eigen::MatrixXcd p = a.adjoint() * a;
  const std::int64_t lags = 2 * n - 1;
  const std::int64_t lf = next_fast_size(lags);

  CVec x1(static_cast<std::size_t>(lf * lf), cplx{0.0, 0.0});
  CVec x2(static_cast<std::size_t>(lf * lf), cplx{0.0, 0.0});
  for (std::int64_t u = 0; u < n; ++u) {
    for (std::int64_t v = 0; v < n; ++v) {
      x1[static_cast<std::size_t>(u * lf + v)] = p(u, v);
      x2[static_cast<std::size_t>(u * lf + v)] = p(v, u);
    }
  }
  fft2_inplace(x1, lf, false);
  fft2_inplace(x2, lf, false);
  // Correlation against x2 = product with the index-reversed spectrum.
  for (std::int64_t q1 = 0; q1 < lf; ++q1) {
    const std::int64_t r1 = (lf - q1) % lf;
    for (std::int64_t q2 = 0; q2 < lf; ++q2) {
      const std::int64_t r2 = (lf - q2) % lf;
      x1[static_cast<std::size_t>(q1 * lf + q2)] *=
          x2[static_cast<std::size_t>(r1 * lf + r2)];
    }
  }
  x2.clear();
  x2.shrink_to_fit();
  fft2_inplace(x1, lf, true);

  Eigen::MatrixXcd h(lags, lags);
  for (std::int64_t k = -(n - 1); k <= n - 1; ++k) {
    const std::int64_t ik = ((k % lf) + lf) % lf;
    for (std::int64_t kp = -(n - 1); kp <= n - 1; ++kp) {
      const std::int64_t ikp = ((kp % lf) + lf) % lf;
      h(k + n - 1, kp + n - 1) = x1[static_cast<std::size_t>(ik * lf + ikp)];
    }
  }
  // Gram matrices are Hermitian; remove the FFT rounding drift.
  h = ((h + h.adjoint()) / 2.0).eval();
  return h;
}

double power_iter_max(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply,
                      std::int64_t dim) {
  Eigen::VectorXcd v(dim);
  for (std::int64_t i = 0; i < dim; ++i) {
    v(i) = cplx{std::cos(0.7 * static_cast<double>(i) + 0.3), std::sin(1.1 * static_cast<double>(i))};
  }
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 25; ++it) {
    Eigen::VectorXcd w = apply(v);
    lambda = w.norm();
    if (lambda == 0.0) return 0.0;
    v = w / lambda;
  }
  return lambda;
}

// Per-snapshot contribution to the lag right-hand side: with V = A^H y the
// k-th entry is sum_n V[n+k] conj(V[n]), an (unnormalized) autocorrelation.
void accumulate_lag_rhs(const Eigen::VectorXcd& v, Eigen::VectorXcd& rhs) {
  const std::int64_t n = v.size();
  CVec col(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = v(i);
  AutocorrSeq corr = autocorr_fft(col);
  for (std::int64_t k = -(n - 1); k <= n - 1; ++k) {
    rhs(k + n - 1) += corr.at(k) * static_cast<double>(n);
  }
}

}  // namespace

TimeBaselineContext make_time_baseline_context(const Eigen::MatrixXcd& a,
                                               const BaselineOptions& opts) {
  require(a.rows() > 0 && a.cols() > 0, "baseline: empty sensing matrix");
  TimeBaselineContext ctx;
  ctx.a = a;
  ctx.n = a.cols();
  ctx.m_count = a.rows();
  const std::int64_t lags = 2 * ctx.n - 1;

  Eigen::MatrixXcd h = lag_gram(a);
  const double max_diag = h.diagonal().real().maxCoeff();
  require(max_diag > 0.0, "baseline: degenerate Gram");

  const double lambda_max =
      power_iter_max([&](const Eigen::VectorXcd& v) { return (h * v).eval(); }, lags);

  const double ridge = opts.ridge_rel * max_diag;
  Eigen::MatrixXcd h_reg = h;
  h_reg.diagonal().array() += ridge;
  ctx.llt.compute(h_reg);
  require(ctx.llt.info() == Eigen::Success, "baseline: Cholesky failed on Gram");

  const double inv_norm = power_iter_max(
      [&](const Eigen::VectorXcd& v) { return ctx.llt.solve(v).eval(); }, lags);
  const double lambda_min = inv_norm > 0.0 ? 1.0 / inv_norm : 0.0;
  ctx.cond_estimate = lambda_min > 0.0 ? lambda_max / lambda_min : 1e300;

  if (ctx.cond_estimate > opts.cond_limit && lags <= opts.trunc_eig_max) {
    // Minimum-norm solution on the well-conditioned eigenspace.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    require(es.info() == Eigen::Success, "baseline: eigendecomposition failed");
    const double cutoff = es.eigenvalues().maxCoeff() / opts.cond_limit;
    ctx.trunc_vecs = es.eigenvectors();
    ctx.trunc_inv_vals = Eigen::VectorXd::Zero(lags);
    for (std::int64_t i = 0; i < lags; ++i) {
      if (es.eigenvalues()(i) > cutoff) {
        ctx.trunc_inv_vals(i) = 1.0 / es.eigenvalues()(i);
      }
    }
    ctx.truncated = true;
  }
  return ctx;
}

BaselineResult baseline_time_domain_with(const TimeBaselineContext& ctx,
                                         const std::vector<CVec>& snapshots) {
  require(!snapshots.empty(), "baseline: need at least one snapshot");
  const std::int64_t lags = 2 * ctx.n - 1;
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(lags);
  for (const auto& snap : snapshots) {
    require(static_cast<std::int64_t>(snap.size()) == ctx.m_count,
            "baseline: snapshot length mismatch");
    Eigen::Map<const Eigen::VectorXcd> y(snap.data(), ctx.m_count);
    accumulate_lag_rhs(ctx.a.adjoint() * y, rhs);
  }
  rhs /= static_cast<double>(snapshots.size());

  Eigen::VectorXcd sol;
  if (ctx.truncated) {
    sol = ctx.trunc_vecs *
          (ctx.trunc_inv_vals.asDiagonal() * (ctx.trunc_vecs.adjoint() * rhs));
  } else {
    sol = ctx.llt.solve(rhs);
  }

  BaselineResult res;
  res.cond_estimate = ctx.cond_estimate;
  res.truncated = ctx.truncated;
  res.r_s.n_ref = ctx.n;
  res.r_s.lags.resize(static_cast<std::size_t>(lags));
  for (std::int64_t i = 0; i < lags; ++i) {
    res.r_s.lags[static_cast<std::size_t>(i)] = sol(i);
  }
  // Enforce the Hermitian lag structure the model implies.
  for (std::int64_t k = 0; k <= res.r_s.max_lag(); ++k) {
    const cplx h = 0.5 * (res.r_s.at(k) + std::conj(res.r_s.at(-k)));
    res.r_s.at(k) = h;
    res.r_s.at(-k) = std::conj(h);
  }
  res.flops = flop_count(FlopMethod::time_domain, ctx.n, ctx.m_count,
                         static_cast<std::int64_t>(snapshots.size()));
  return res;
}

BaselineResult baseline_time_domain(const std::vector<CVec>& snapshots,
                                    const Eigen::MatrixXcd& a,
                                    const BaselineOptions& opts) {
  return baseline_time_domain_with(make_time_baseline_context(a, opts), snapshots);
}

Eigen::MatrixXcd freq_sensing_matrix(const Eigen::MatrixXcd& a,
                                     const NyfrConfig& cfg) {
  const std::int64_t n = cfg.grid.n_samples;
  const std::int64_t mc = cfg.m_count();
  require(a.rows() == mc && a.cols() == n, "freq_sensing_matrix: shape mismatch");

  // Left factor: plain M-point DFT of the measurement.
  Eigen::MatrixXcd dft_m(mc, mc);
  for (std::int64_t q = 0; q < mc; ++q) {
    for (std::int64_t m = 0; m < mc; ++m) {
      const double ph = -kTwoPi * static_cast<double>(q) * static_cast<double>(m) /
                        static_cast<double>(mc);
      dft_m(q, m) = cplx{std::cos(ph), std::sin(ph)};
    }
  }
  // Right factor: inverse of the label-ordered N-point analysis transform.
  Eigen::MatrixXcd idft_n(n, n);
  const std::int64_t half_m = mc / 2;
  for (std::int64_t t = 0; t < n; ++t) {
    for (std::int64_t i = 0; i < n; ++i) {
      const double ph = kTwoPi * static_cast<double>(i - half_m) *
                        static_cast<double>(t) / static_cast<double>(n);
      idft_n(t, i) = cplx{std::cos(ph), std::sin(ph)} / static_cast<double>(n);
    }
  }
  return dft_m * a * idft_n;
}

FreqBaselineContext make_freq_baseline_context(const Eigen::MatrixXcd& b,
                                               const BaselineOptions& opts) {
  require(b.rows() > 0 && b.cols() > 0, "baseline: empty sensing matrix");
  FreqBaselineContext ctx;
  ctx.b = b;
  ctx.n = b.cols();
  ctx.m_count = b.rows();

  // Khatri-Rao Gram collapses to |B^H B|^2 elementwise.
  const Eigen::MatrixXcd f = b.adjoint() * b;
  Eigen::MatrixXd gram = f.cwiseAbs2();
  gram = ((gram + gram.transpose()) / 2.0).eval();

  const double max_diag = gram.diagonal().maxCoeff();
  require(max_diag > 0.0, "baseline: degenerate Gram");

  const double lambda_max = power_iter_max(
      [&](const Eigen::VectorXcd& v) {
        return (gram * v.real()).eval().cast<cplx>().eval();
      },
      ctx.n);

  Eigen::MatrixXd gram_reg = gram;
  gram_reg.diagonal().array() += opts.ridge_rel * max_diag;
  ctx.ldlt.compute(gram_reg);
  require(ctx.ldlt.info() == Eigen::Success, "baseline: LDLT failed on Gram");

  const double inv_norm = power_iter_max(
      [&](const Eigen::VectorXcd& v) {
        return ctx.ldlt.solve(v.real().eval()).eval().cast<cplx>().eval();
      },
      ctx.n);
  const double lambda_min = inv_norm > 0.0 ? 1.0 / inv_norm : 0.0;
  ctx.cond_estimate = lambda_min > 0.0 ? lambda_max / lambda_min : 1e300;

  if (ctx.cond_estimate > opts.cond_limit && ctx.n <= opts.trunc_eig_max) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    require(es.info() == Eigen::Success, "baseline: eigendecomposition failed");
    const double cutoff = es.eigenvalues().maxCoeff() / opts.cond_limit;
    ctx.trunc_vecs = es.eigenvectors();
    ctx.trunc_inv_vals = Eigen::VectorXd::Zero(ctx.n);
    for (std::int64_t i = 0; i < ctx.n; ++i) {
      if (es.eigenvalues()(i) > cutoff) {
        ctx.trunc_inv_vals(i) = 1.0 / es.eigenvalues()(i);
      }
    }
    ctx.truncated = true;
  }
  return ctx;
}

FreqBaselineResult baseline_freq_domain_with(const FreqBaselineContext& ctx,
                                             const std::vector<CVec>& snapshots,
                                             const NyfrConfig& cfg) {
  require(!snapshots.empty(), "baseline: need at least one snapshot");
  require(ctx.n == cfg.grid.n_samples && ctx.m_count == cfg.m_count(),
          "baseline: context does not match config");

  // rhs[n] = mean_l |b_n^H y_tilde_l|^2 without forming the covariance.
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ctx.n);
  for (const auto& snap : snapshots) {
    require(static_cast<std::int64_t>(snap.size()) == ctx.m_count,
            "baseline: snapshot length mismatch");
    const CVec spec = fft(snap);
    Eigen::Map<const Eigen::VectorXcd> yt(spec.data(), ctx.m_count);
    rhs += (ctx.b.adjoint() * yt).cwiseAbs2();
  }
  rhs /= static_cast<double>(snapshots.size());

  Eigen::VectorXd sol;
  if (ctx.truncated) {
    sol = ctx.trunc_vecs *
          (ctx.trunc_inv_vals.asDiagonal() * (ctx.trunc_vecs.transpose() * rhs));
  } else {
    sol = ctx.ldlt.solve(rhs);
  }

  FreqBaselineResult res;
  res.cond_estimate = ctx.cond_estimate;
  res.truncated = ctx.truncated;
  res.grid = label_grid(cfg);
  res.values.assign(sol.data(), sol.data() + sol.size());
  res.flops = flop_count(FlopMethod::freq_domain, ctx.n, ctx.m_count,
                         static_cast<std::int64_t>(snapshots.size()));
  return res;
}

FreqBaselineResult baseline_freq_domain(const std::vector<CVec>& snapshots,
                                        const Eigen::MatrixXcd& b,
                                        const NyfrConfig& cfg,
                                        const BaselineOptions& opts) {
  return baseline_freq_domain_with(make_freq_baseline_context(b, opts), snapshots,
                                   cfg);
}

PowerSpectrum baseline_spectrum(const BaselineResult& res, LagWindow window,
                                const NyfrConfig& cfg) {
  PowerSpectrum ps = power_spectrum(res.r_s, window, cfg.grid.sample_rate_hz,
                                    cfg.band_start_hz());
  ps.method = "time_domain";
  return ps;
}

PowerSpectrum baseline_spectrum(const FreqBaselineResult& res) {
  PowerSpectrum ps;
  ps.values = res.values;
  ps.freq_start_hz = res.grid.start_hz;
  ps.freq_step_hz = res.grid.step_hz;
  ps.method = "freq_domain";
  return ps;
}

}  // namespace nyfr

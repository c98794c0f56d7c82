#include "nyfr/detection.hpp"

#include <algorithm>
#include <cmath>

namespace nyfr {

namespace {

double median_of(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    std::nth_element(v.begin(), v.begin() + mid - 1, v.end());
    m = 0.5 * (m + v[mid - 1]);
  }
  return m;
}

}  // namespace

std::vector<double> smooth_spectrum(const std::vector<double>& values,
                                    std::int64_t half_width) {
  require(half_width >= 0, "smooth_spectrum: negative half width");
  const std::int64_t n = static_cast<std::int64_t>(values.size());
  if (half_width == 0 || n == 0) return values;
  require(half_width < n, "smooth_spectrum: half width exceeds spectrum");

  // Raised-cosine weights: strictly concave around the center, so the sum of
  // two equal nearby masses peaks at their midpoint rather than plateauing
  // (a triangular kernel would tie over the whole gap).
  std::vector<double> w(static_cast<std::size_t>(2 * half_width + 1));
  double norm = 0.0;
  for (std::int64_t d = -half_width; d <= half_width; ++d) {
    const double c = 0.5 * (1.0 + std::cos(kPi * d / (half_width + 1.0)));
    w[static_cast<std::size_t>(d + half_width)] = c;
    norm += c;
  }
  std::vector<double> out(values.size());
  for (std::int64_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::int64_t d = -half_width; d <= half_width; ++d) {
      std::int64_t j = i + d;
      if (j < 0) j = -j;                    // reflect at the edges
      if (j >= n) j = 2 * (n - 1) - j;
      acc += w[static_cast<std::size_t>(d + half_width)] *
             values[static_cast<std::size_t>(j)];
    }
    out[static_cast<std::size_t>(i)] = acc / norm;
  }
  return out;
}

double detection_threshold(const std::vector<double>& smoothed_values,
                           double gamma) {
  require(gamma > 0.0, "detection_threshold: gamma must be positive");
  require(!smoothed_values.empty(), "detection_threshold: empty spectrum");
  const double med = median_of(smoothed_values);
  std::vector<double> dev(smoothed_values.size());
  for (std::size_t i = 0; i < smoothed_values.size(); ++i) {
    dev[i] = std::abs(smoothed_values[i] - med);
  }
  return med + gamma * median_of(dev);
}

std::vector<Detection> detect_peaks(const PowerSpectrum& ps,
                                    const DetectionPolicy& policy) {
  require(policy.min_separation_bins >= 0, "detect_peaks: negative separation");
  std::vector<double> v = smooth_spectrum(ps.values, policy.smooth_bins);
  require(v.size() >= 3, "detect_peaks: spectrum too short");
  const double threshold = detection_threshold(v, policy.gamma);

  std::vector<Detection> found;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] > threshold && v[i] > v[i - 1] && v[i] >= v[i + 1]) {
      found.push_back(Detection{static_cast<std::int64_t>(i),
                                ps.freq_of(static_cast<std::int64_t>(i)), v[i]});
    }
  }
  std::sort(found.begin(), found.end(),
            [](const Detection& a, const Detection& b) { return a.power > b.power; });

  std::vector<Detection> kept;
  for (const auto& d : found) {
    bool shadowed = false;
    for (const auto& k : kept) {
      if (std::abs(d.bin - k.bin) <= policy.min_separation_bins) {
        shadowed = true;
        break;
      }
    }
    if (!shadowed) kept.push_back(d);
  }
  return kept;
}

namespace {

double truth_tol_hz(const TruthBand& t, const PowerSpectrum& ps,
                    const DetectionPolicy& policy) {
  return std::max(policy.freq_tol_bins * ps.freq_step_hz, t.support_hz / 3.0);
}

}  // namespace

bool is_eligible(const std::vector<Detection>& detections,
                 const std::vector<TruthBand>& truths, const PowerSpectrum& ps,
                 const DetectionPolicy& policy) {
  require(!truths.empty(), "is_eligible: need at least one true emitter");

  for (const auto& t : truths) {
    const double tol = truth_tol_hz(t, ps, policy);
    bool matched = false;
    for (const auto& d : detections) {
      if (std::abs(d.freq_hz - t.freq_hz) <= tol) {
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  // detections are sorted strongest-first by construction; none of the top
  // |truths| may be spurious.
  if (detections.size() < truths.size()) return false;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    bool near_truth = false;
    for (const auto& t : truths) {
      if (std::abs(detections[i].freq_hz - t.freq_hz) <=
          truth_tol_hz(t, ps, policy)) {
        near_truth = true;
        break;
      }
    }
    if (!near_truth) return false;
  }
  if (policy.coverage_frac <= 0.0) return true;

  // Coverage is judged on the raw spectrum: each occupied bin must itself
  // rise above the noise threshold.  The smoothed spectrum would smear any
  // single line across a whole band and make the test vacuous.
  const double threshold = detection_threshold(ps.values, policy.gamma);
  const std::int64_t n = static_cast<std::int64_t>(ps.values.size());
  for (const auto& t : truths) {
    if (!t.continuous_support || t.support_hz <= ps.freq_step_hz) continue;
    const std::int64_t lo = ps.bin_of(t.freq_hz - 0.5 * t.support_hz);
    const std::int64_t hi = ps.bin_of(t.freq_hz + 0.5 * t.support_hz);
    std::int64_t total = 0;
    std::int64_t above = 0;
    for (std::int64_t b = std::max<std::int64_t>(lo, 0);
         b <= std::min(hi, n - 1); ++b) {
      ++total;
      if (ps.values[static_cast<std::size_t>(b)] > threshold) ++above;
    }
    if (total == 0) return false;
    if (static_cast<double>(above) <
        policy.coverage_frac * static_cast<double>(total)) {
      return false;
    }
  }
  return true;
}

bool is_eligible(const std::vector<Detection>& detections,
                 const std::vector<double>& truth_hz, const PowerSpectrum& ps,
                 const DetectionPolicy& policy) {
  require(!truth_hz.empty(), "is_eligible: need at least one true carrier");
  const double tol_hz = policy.freq_tol_bins * ps.freq_step_hz;

  for (double truth : truth_hz) {
    bool matched = false;
    for (const auto& d : detections) {
      if (std::abs(d.freq_hz - truth) <= tol_hz) {
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  // detections are sorted strongest-first by construction.
  const std::size_t top = std::min(detections.size(), truth_hz.size());
  if (top < truth_hz.size()) return false;
  for (std::size_t i = 0; i < top; ++i) {
    bool near_truth = false;
    for (double truth : truth_hz) {
      if (std::abs(detections[i].freq_hz - truth) <= tol_hz) {
        near_truth = true;
        break;
      }
    }
    if (!near_truth) return false;
  }
  return true;
}

}  // namespace nyfr

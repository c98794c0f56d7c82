#pragma once

#include <cstdint>
#include <vector>

#include "nyfr/reconstruction.hpp"
#include "nyfr/types.hpp"

namespace nyfr {

struct DetectionPolicy {
  // Threshold = median + gamma * MAD of the spectrum values (robust noise
  // floor; immune to the few strong lines).
  double gamma = 5.0;
  // Non-maximum suppression radius and truth-matching tolerance, in bins.
  // The tolerance is loose relative to the smoothing kernel half-width below:
  // smoothing trades peak localization for robust wideband-emitter ranking,
  // so a matching window much narrower than the kernel would reject trials
  // whose spectrum is in fact correct.
  std::int64_t min_separation_bins = 25;
  double freq_tol_bins = 4.0;
  // Raised-cosine pre-smoothing half-width in bins (0 = off).  Lets emitters
  // with distributed spectra (chirps, phase codes) compete by collected power
  // and centers symmetric line pairs on their carrier.
  std::int64_t smooth_bins = 25;
  // Spectral-support coverage requirement (0 = off).  When positive, a truth
  // emitter with a declared occupied bandwidth only counts as sensed if at
  // least this fraction of the bins across its band sit above the detection
  // threshold: its power spectrum must actually be recovered, not merely a
  // peak located.  Narrowband emitters (support below one bin) are exempt.
  double coverage_frac = 0.85;
};

// A true emitter for eligibility scoring: carrier plus the two-sided width of
// its occupied band (0 for a pure tone).  The band loosens the location
// tolerance -- a spread emitter cannot be pinned tighter than a fraction of
// its own width.  continuous_support marks spectra that genuinely fill their
// band (chirps); line spectra such as coded BPSK have in-band nulls by
// construction, so band coverage is not a recovery criterion for them.
struct TruthBand {
  double freq_hz = 0.0;
  double support_hz = 0.0;
  bool continuous_support = false;
};

// The smoothing stage of detect_peaks, exposed for inspection: raised-cosine
// kernel of the given half-width, unit DC gain, reflecting at the edges.
std::vector<double> smooth_spectrum(const std::vector<double>& values,
                                    std::int64_t half_width);

// The threshold stage of detect_peaks, exposed for inspection: median plus
// gamma times the median absolute deviation of the (smoothed) values.
double detection_threshold(const std::vector<double>& smoothed_values,
                           double gamma);

struct Detection {
  std::int64_t bin = 0;
  double freq_hz = 0.0;
  double power = 0.0;
};

// Local maxima above the robust threshold, strongest first, with weaker peaks
// suppressed within min_separation_bins of a stronger one.
std::vector<Detection> detect_peaks(const PowerSpectrum& ps,
                                    const DetectionPolicy& policy);

// A trial counts as correct when every true carrier has a detection within
// freq_tol_bins of it AND the strongest |truth| detections all sit within
// tolerance of some true carrier (no spurious line outranks a real one).
bool is_eligible(const std::vector<Detection>& detections,
                 const std::vector<double>& truth_hz, const PowerSpectrum& ps,
                 const DetectionPolicy& policy);

// Full eligibility: the peak conditions above with per-truth tolerance
// max(freq_tol_bins * bin, support/3), plus (when coverage_frac > 0) the
// support-coverage condition for each continuous-spectrum truth band.
bool is_eligible(const std::vector<Detection>& detections,
                 const std::vector<TruthBand>& truths, const PowerSpectrum& ps,
                 const DetectionPolicy& policy);

}  // namespace nyfr

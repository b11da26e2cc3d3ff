#ifndef SSC_FEATURES_ZWICKER_HPP
#define SSC_FEATURES_ZWICKER_HPP

#include <vector>

#include "features/types.hpp"

namespace ssc {

// Time-varying total loudness (sone, free field) of a calibrated waveform in
// pascal units, one frame per 2 ms. Critical-band procedure: third-octave
// filterbank, band energies smoothed in time, grouping into 20 critical
// bands, specific loudness with level-dependent upper-slope spreading on a
// 0.1 Bark grid, spectral integration, then attack/release smoothing.
LoudnessSeries zwicker_loudness(const std::vector<float>& pa_waveform,
                                int sample_rate);

// Steady-state total loudness for a vector of 28 third-octave band levels
// (dB SPL, 25 Hz..12.5 kHz). Exposed for tests and the calibration anchor.
double stationary_loudness_from_bands(const std::vector<double>& band_db);

} // namespace ssc

#endif

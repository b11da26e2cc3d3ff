#ifndef SSC_FEATURES_MEL_HPP
#define SSC_FEATURES_MEL_HPP

#include <vector>

#include "features/types.hpp"

namespace ssc {

// Floor applied before the log so silence maps to a finite constant.
inline constexpr double kLogFloor = 1e-10;

// Log-mel spectrogram: Hamming window of 32 ms, hop 10 ms, 64 mel bands
// between 50 Hz and min(14 kHz, Nyquist). Frames are centred, so a clip of
// d seconds yields floor(100 * d) frames.
MelSpectrogram log_mel(const std::vector<float>& waveform, int sample_rate);

// Centre frequencies of the 64 mel bands for a given sample rate.
std::vector<double> mel_band_centers(int sample_rate);

} // namespace ssc

#endif

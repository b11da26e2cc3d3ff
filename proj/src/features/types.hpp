#ifndef SSC_FEATURES_TYPES_HPP
#define SSC_FEATURES_TYPES_HPP

#include <cstdint>
#include <vector>

namespace ssc {

inline constexpr int kMelBands = 64;
inline constexpr int kMelHopMs = 10;
inline constexpr int kMelWindowMs = 32;
inline constexpr int kLoudnessHopMs = 2;

struct MelSpectrogram {
    int n_frames = 0;
    // Row-major n_frames x kMelBands log energies.
    std::vector<float> values;

    float at(int frame, int band) const { return values[frame * kMelBands + band]; }
};

struct LoudnessSeries {
    int n_frames = 0;
    std::vector<float> values; // sone, one per 2 ms frame
};

struct FeaturePair {
    MelSpectrogram mel;
    LoudnessSeries loudness;
    int sample_rate = 0;
};

} // namespace ssc

#endif

#ifndef SSC_PIPELINE_FIXTURE_HPP
#define SSC_PIPELINE_FIXTURE_HPP

#include <cstdint>
#include <string>

namespace ssc {

// Synthetic end-to-end dataset: tones and shaped noise with constructed
// labels, spectrally separable by scene. Written under `root`:
//   audio/clip_XX.wav        8 mono clips (3 s, 32 kHz)
//   audio/calibration.wav    1 kHz reference tone
//   manifest.csv             labels + splits (5 train / 2 val / 1 test)
//   tagger/<clip>.txt        per-second 527-class probabilities
//   tagger/classes.txt       tagger class names, one per line
//   tagger/maskers.txt       masker class names, one per line
//   ratings.csv              two raters x expert/system caption ratings
struct FixtureSpec {
    std::string root;
    std::uint64_t seed = 7;
    int n_clips = 8;
    double duration_s = 3.0;
    int sample_rate = 32000;
};

void make_fixture(const FixtureSpec& spec);

} // namespace ssc

#endif

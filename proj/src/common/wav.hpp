#ifndef SSC_COMMON_WAV_HPP
#define SSC_COMMON_WAV_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace ssc {

struct WavData {
    int sample_rate = 0;
    int channels = 0;
    // Interleaved samples in [-1, 1].
    std::vector<float> samples;

    std::size_t frame_count() const {
        return channels > 0 ? samples.size() / channels : 0;
    }
    double duration_s() const {
        return sample_rate > 0 ? double(frame_count()) / sample_rate : 0.0;
    }
    // Channel average, the policy used before both feature extractors.
    std::vector<float> mono() const;
};

WavData read_wav(const std::string& path);
// Peeks format/duration without decoding samples.
WavData read_wav_header(const std::string& path);
void write_wav(const std::string& path, const std::vector<float>& mono,
               int sample_rate);

} // namespace ssc

#endif

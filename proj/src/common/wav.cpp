#include "common/wav.hpp"

#include <cstring>
#include <fstream>

#include "common/errors.hpp"

namespace ssc {

std::vector<float> WavData::mono() const {
    if (channels <= 1) return samples;
    std::vector<float> out(frame_count());
    for (std::size_t i = 0; i < out.size(); ++i) {
        float acc = 0.f;
        for (int c = 0; c < channels; ++c) acc += samples[i * channels + c];
        out[i] = acc / float(channels);
    }
    return out;
}

namespace {

struct ChunkHeader {
    char id[4];
    uint32_t size;
};

uint16_t rd16(const unsigned char* p) { return uint16_t(p[0] | (p[1] << 8)); }
uint32_t rd32(const unsigned char* p) {
    return uint32_t(p[0] | (p[1] << 8) | (p[2] << 16) | (uint32_t(p[3]) << 24));
}

WavData read_impl(const std::string& path, bool want_samples) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw MissingAudioError("cannot open audio file '" + path + "'");

    char riff[12];
    if (!f.read(riff, 12) || std::memcmp(riff, "RIFF", 4) != 0 ||
        std::memcmp(riff + 8, "WAVE", 4) != 0)
        throw ParseError("'" + path + "' is not a RIFF/WAVE file");

    WavData wav;
    uint16_t format = 0, bits = 0;
    bool have_fmt = false;

    while (true) {
        ChunkHeader ch;
        if (!f.read(reinterpret_cast<char*>(&ch), 8)) break;
        if (std::memcmp(ch.id, "fmt ", 4) == 0) {
            std::vector<unsigned char> buf(ch.size);
            if (!f.read(reinterpret_cast<char*>(buf.data()), ch.size))
                throw ParseError("truncated fmt chunk in '" + path + "'");
            if (ch.size < 16) throw ParseError("short fmt chunk in '" + path + "'");
            format = rd16(&buf[0]);
            wav.channels = rd16(&buf[2]);
            wav.sample_rate = int(rd32(&buf[4]));
            bits = rd16(&buf[14]);
            have_fmt = true;
            if (ch.size & 1) f.seekg(1, std::ios::cur);
        } else if (std::memcmp(ch.id, "data", 4) == 0) {
            if (!have_fmt) throw ParseError("data chunk before fmt in '" + path + "'");
            if (wav.channels < 1 || wav.sample_rate <= 0)
                throw ParseError("invalid wav format fields in '" + path + "'");
            const uint32_t bytes_per = bits / 8;
            if (bytes_per == 0) throw ParseError("zero bit depth in '" + path + "'");
            const std::size_t n = ch.size / bytes_per;
            if (!want_samples) {
                wav.samples.assign(n, 0.f); // shape only
                return wav;
            }
            std::vector<unsigned char> raw(ch.size);
            if (!f.read(reinterpret_cast<char*>(raw.data()), ch.size))
                throw ParseError("truncated data chunk in '" + path + "'");
            wav.samples.resize(n);
            if (format == 1 && bits == 16) {
                for (std::size_t i = 0; i < n; ++i) {
                    int16_t v = int16_t(rd16(&raw[i * 2]));
                    wav.samples[i] = float(v) / 32768.f;
                }
            } else if (format == 3 && bits == 32) {
                for (std::size_t i = 0; i < n; ++i) {
                    uint32_t v = rd32(&raw[i * 4]);
                    float fv;
                    std::memcpy(&fv, &v, 4);
                    wav.samples[i] = fv;
                }
            } else if (format == 1 && bits == 32) {
                for (std::size_t i = 0; i < n; ++i) {
                    int32_t v = int32_t(rd32(&raw[i * 4]));
                    wav.samples[i] = float(double(v) / 2147483648.0);
                }
            } else {
                throw ParseError("unsupported wav encoding (format=" +
                                 std::to_string(format) + ", bits=" +
                                 std::to_string(bits) + ") in '" + path + "'");
            }
            return wav;
        } else {
            f.seekg(ch.size + (ch.size & 1), std::ios::cur);
        }
    }
    throw ParseError("no data chunk in '" + path + "'");
}

} // namespace

WavData read_wav(const std::string& path) { return read_impl(path, true); }
WavData read_wav_header(const std::string& path) { return read_impl(path, false); }

void write_wav(const std::string& path, const std::vector<float>& mono,
               int sample_rate) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot create '" + path + "'");
    const uint32_t data_bytes = uint32_t(mono.size() * 2);
    auto w16 = [&](uint16_t v) { f.put(char(v & 0xff)); f.put(char(v >> 8)); };
    auto w32 = [&](uint32_t v) {
        for (int i = 0; i < 4; ++i) f.put(char((v >> (8 * i)) & 0xff));
    };
    f.write("RIFF", 4);
    w32(36 + data_bytes);
    f.write("WAVE", 4);
    f.write("fmt ", 4);
    w32(16);
    w16(1); // PCM
    w16(1); // mono
    w32(uint32_t(sample_rate));
    w32(uint32_t(sample_rate) * 2);
    w16(2);
    w16(16);
    f.write("data", 4);
    w32(data_bytes);
    for (float s : mono) {
        float c = s < -1.f ? -1.f : (s > 1.f ? 1.f : s);
        int v = int(c < 0 ? c * 32768.f - 0.5f : c * 32767.f + 0.5f);
        w16(uint16_t(int16_t(v)));
    }
    if (!f) throw IoError("short write to '" + path + "'");
}

} // namespace ssc

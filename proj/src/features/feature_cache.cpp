#include "features/feature_cache.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

#include "common/errors.hpp"

namespace ssc {

namespace {

constexpr char kMagic[4] = {'S', 'S', 'C', 'F'};

template <typename T>
void put(std::ofstream& f, T v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& f, const std::string& path) {
    T v;
    if (!f.read(reinterpret_cast<char*>(&v), sizeof(T)))
        throw ParseError("truncated feature file '" + path + "'");
    return v;
}

} // namespace

void save_features(const FeaturePair& features, uint64_t config_hash,
                   const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot create '" + path + "'");
    f.write(kMagic, 4);
    put<uint32_t>(f, kFeatureFileVersion);
    put<uint64_t>(f, config_hash);
    put<int32_t>(f, features.sample_rate);
    put<int32_t>(f, features.mel.n_frames);
    put<int32_t>(f, kMelBands);
    put<int32_t>(f, kMelHopMs);
    put<int32_t>(f, features.loudness.n_frames);
    put<int32_t>(f, kLoudnessHopMs);
    f.write(reinterpret_cast<const char*>(features.mel.values.data()),
            std::streamsize(features.mel.values.size() * sizeof(float)));
    f.write(reinterpret_cast<const char*>(features.loudness.values.data()),
            std::streamsize(features.loudness.values.size() * sizeof(float)));
    if (!f) throw IoError("short write to '" + path + "'");
}

FeaturePair load_features(const std::string& path, uint64_t* config_hash_out) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw CacheMissError("feature file '" + path + "' not found");
    char magic[4];
    if (!f.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        throw ParseError("'" + path + "' is not a feature cache file");
    const auto version = get<uint32_t>(f, path);
    if (version != kFeatureFileVersion)
        throw VersionError("feature file '" + path + "' has version " +
                           std::to_string(version) + ", expected " +
                           std::to_string(kFeatureFileVersion));
    const auto config_hash = get<uint64_t>(f, path);
    if (config_hash_out) *config_hash_out = config_hash;

    FeaturePair out;
    out.sample_rate = get<int32_t>(f, path);
    out.mel.n_frames = get<int32_t>(f, path);
    const auto mel_bands = get<int32_t>(f, path);
    const auto mel_hop = get<int32_t>(f, path);
    out.loudness.n_frames = get<int32_t>(f, path);
    const auto loud_hop = get<int32_t>(f, path);
    if (mel_bands != kMelBands || mel_hop != kMelHopMs || loud_hop != kLoudnessHopMs)
        throw ParseError("feature file '" + path + "' metadata mismatch");

    out.mel.values.resize(std::size_t(out.mel.n_frames) * kMelBands);
    out.loudness.values.resize(std::size_t(out.loudness.n_frames));
    if (!f.read(reinterpret_cast<char*>(out.mel.values.data()),
                std::streamsize(out.mel.values.size() * sizeof(float))) ||
        !f.read(reinterpret_cast<char*>(out.loudness.values.data()),
                std::streamsize(out.loudness.values.size() * sizeof(float))))
        throw ParseError("truncated feature data in '" + path + "'");
    return out;
}

bool feature_file_exists(const std::string& path) {
    return std::filesystem::exists(path);
}

std::string feature_cache_path(const std::string& cache_dir,
                               const std::string& clip_id) {
    return (std::filesystem::path(cache_dir) / (clip_id + ".sscf")).string();
}

} // namespace ssc

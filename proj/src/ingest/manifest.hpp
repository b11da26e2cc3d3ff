#ifndef SSC_INGEST_MANIFEST_HPP
#define SSC_INGEST_MANIFEST_HPP

#include <array>
#include <string>
#include <vector>

#include "common/domain.hpp"

namespace ssc {

enum class Split { none, train, val, test };

std::string split_name(Split s);
Split split_from_name(const std::string& name);

struct ClipRecord {
    std::string clip_id;
    std::string audio_path; // resolved against the manifest directory
    double duration_s = 0.0;
    int sample_rate = 0;
    int scene = 0;
    std::array<int, kNumEvents> event_multihot{};
    std::array<int, kNumAq> aq_responses{}; // each in {1..5}
    Split split = Split::none;

    LabelSet labels() const;
};

struct DatasetManifest {
    std::vector<ClipRecord> records;
    std::array<std::string, kNumEvents> event_vocabulary = kEventNames;

    std::vector<const ClipRecord*> in_split(Split s) const;
};

// Model minimum input length; shorter clips are rejected at ingest.
inline constexpr double kMinClipSeconds = 2.80;

// Manifest file: UTF-8 comma-separated with header
//   clip_id,audio_path,scene,e1..e15,aq1..aq8,split
// Audio headers are read to fill duration/sample rate, so every referenced
// file must exist.
DatasetManifest load_manifest(const std::string& path);
void save_manifest(const DatasetManifest& manifest, const std::string& path);

struct SplitSizes {
    std::size_t n_train = 0;
    std::size_t n_val = 0;
    std::size_t n_test = 0;
};

// Random disjoint assignment, reproducible under a fixed seed. Records not
// drawn keep Split::none.
DatasetManifest split_dataset(const DatasetManifest& manifest, SplitSizes sizes,
                              uint64_t seed);

} // namespace ssc

#endif

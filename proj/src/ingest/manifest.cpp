#include "ingest/manifest.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include "common/errors.hpp"
#include "common/textio.hpp"
#include "common/wav.hpp"

namespace fs = std::filesystem;

namespace ssc {

std::string split_name(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::val: return "val";
        case Split::test: return "test";
        default: return "";
    }
}

Split split_from_name(const std::string& name) {
    if (name == "train") return Split::train;
    if (name == "val") return Split::val;
    if (name == "test") return Split::test;
    if (name.empty()) return Split::none;
    throw ParseError("unknown split tag '" + name + "'");
}

LabelSet ClipRecord::labels() const {
    LabelSet l;
    l.scene = scene;
    l.events = event_multihot;
    l.aq = aq_responses;
    return l;
}

std::vector<const ClipRecord*> DatasetManifest::in_split(Split s) const {
    std::vector<const ClipRecord*> out;
    for (const auto& r : records)
        if (r.split == s) out.push_back(&r);
    return out;
}

namespace {

const int kManifestColumns = 3 + kNumEvents + kNumAq + 1;

std::string expected_header() {
    std::string h = "clip_id,audio_path,scene";
    for (int i = 1; i <= kNumEvents; ++i) h += ",e" + std::to_string(i);
    for (int i = 1; i <= kNumAq; ++i) h += ",aq" + std::to_string(i);
    return h + ",split";
}

} // namespace

DatasetManifest load_manifest(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw ParseError("manifest '" + path + "' is empty");
    if (trim(lines[0]) != expected_header())
        throw ParseError("manifest '" + path + "' header mismatch; expected '" +
                         expected_header() + "'");

    const fs::path base = fs::path(path).parent_path();
    DatasetManifest m;
    std::set<std::string> seen_ids;

    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (trim(lines[li]).empty()) continue;
        const auto cols = split(lines[li], ',');
        if (int(cols.size()) != kManifestColumns)
            throw ParseError("manifest row " + std::to_string(li + 1) + " has " +
                             std::to_string(cols.size()) + " columns, expected " +
                             std::to_string(kManifestColumns));
        ClipRecord rec;
        rec.clip_id = trim(cols[0]);
        if (rec.clip_id.empty())
            throw ParseError("manifest row " + std::to_string(li + 1) +
                             " has empty clip_id");
        if (!seen_ids.insert(rec.clip_id).second)
            throw ValidationError("duplicate clip_id '" + rec.clip_id + "'");

        fs::path ap = trim(cols[1]);
        if (ap.is_relative()) ap = base / ap;
        rec.audio_path = ap.string();

        const std::string scene = trim(cols[2]);
        rec.scene = scene_index(scene);
        if (rec.scene < 0)
            throw ValidationError("clip '" + rec.clip_id + "': unknown scene '" +
                                  scene + "'");

        for (int e = 0; e < kNumEvents; ++e) {
            const long v = parse_long(cols[3 + e], "event bit of clip " + rec.clip_id);
            if (v != 0 && v != 1)
                throw ValidationError("clip '" + rec.clip_id + "': event bit e" +
                                      std::to_string(e + 1) + " must be 0 or 1");
            rec.event_multihot[e] = int(v);
        }
        for (int a = 0; a < kNumAq; ++a) {
            const long v =
                parse_long(cols[3 + kNumEvents + a], "aq of clip " + rec.clip_id);
            if (v < 1 || v > 5)
                throw ValidationError("clip '" + rec.clip_id + "': aq " +
                                      kAqNames[a] + " = " + std::to_string(v) +
                                      " outside {1..5}");
            rec.aq_responses[a] = int(v);
        }
        rec.split = split_from_name(trim(cols[3 + kNumEvents + kNumAq]));

        if (!fs::exists(rec.audio_path))
            throw MissingAudioError("clip '" + rec.clip_id + "': audio file '" +
                                    rec.audio_path + "' not found");
        const WavData hdr = read_wav_header(rec.audio_path);
        rec.sample_rate = hdr.sample_rate;
        rec.duration_s = hdr.duration_s();
        if (rec.duration_s < kMinClipSeconds)
            throw ValidationError("clip '" + rec.clip_id + "': duration " +
                                  std::to_string(rec.duration_s) +
                                  "s below the 2.80s model minimum");
        m.records.push_back(std::move(rec));
    }
    return m;
}

void save_manifest(const DatasetManifest& manifest, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot create '" + path + "'");
    f << expected_header() << "\n";
    for (const auto& r : manifest.records) {
        f << r.clip_id << ',' << r.audio_path << ',' << kSceneNames[r.scene];
        for (int e = 0; e < kNumEvents; ++e) f << ',' << r.event_multihot[e];
        for (int a = 0; a < kNumAq; ++a) f << ',' << r.aq_responses[a];
        f << ',' << split_name(r.split) << "\n";
    }
    if (!f) throw IoError("short write to '" + path + "'");
}

DatasetManifest split_dataset(const DatasetManifest& manifest, SplitSizes sizes,
                              uint64_t seed) {
    const std::size_t total = sizes.n_train + sizes.n_val + sizes.n_test;
    if (total > manifest.records.size())
        throw SizeError("requested " + std::to_string(total) +
                        " split assignments but manifest has " +
                        std::to_string(manifest.records.size()) + " records");

    std::vector<std::size_t> order(manifest.records.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    DatasetManifest out = manifest;
    for (auto& r : out.records) r.split = Split::none;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < sizes.n_train; ++i)
        out.records[order[pos++]].split = Split::train;
    for (std::size_t i = 0; i < sizes.n_val; ++i)
        out.records[order[pos++]].split = Split::val;
    for (std::size_t i = 0; i < sizes.n_test; ++i)
        out.records[order[pos++]].split = Split::test;
    return out;
}

} // namespace ssc

#include "pipeline/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "common/domain.hpp"
#include "common/errors.hpp"
#include "common/textio.hpp"
#include "common/wav.hpp"
#include "ingest/pseudo_label.hpp"

namespace ssc {

namespace {

namespace fs = std::filesystem;

constexpr int kTaggerStride = 31;
constexpr int kTaggerOffset = 13;

// Fixed placement of the 15-event vocabulary inside the 527-class tagger
// space.
int tagger_index(int vocab_index) {
    return kTaggerOffset + kTaggerStride * vocab_index;
}

struct ClipPlan {
    int scene;
    std::vector<int> events; // vocabulary indices
    std::array<int, kNumAq> aq;
    std::string split;
};

std::vector<ClipPlan> clip_plans() {
    // Scene blocks: 3 square, 3 park, 2 traffic; every vocabulary event
    // appears at least once across the corpus.
    return {
        {0, {10, 11, 8, 12}, {3, 5, 3, 5, 1, 2, 2, 1}, "train"},
        {0, {10, 11, 8, 7}, {3, 4, 3, 5, 1, 2, 2, 1}, "train"},
        {0, {10, 11, 8}, {2, 5, 4, 4, 1, 2, 3, 1}, "val"},
        {1, {0, 4, 9, 2}, {5, 2, 1, 3, 4, 5, 1, 2}, "train"},
        {1, {0, 4, 9, 3}, {4, 2, 1, 3, 4, 5, 1, 2}, "train"},
        {1, {0, 4, 9, 1, 14}, {5, 1, 1, 2, 5, 5, 1, 3}, "val"},
        {2, {5, 6, 13}, {1, 4, 5, 2, 2, 1, 5, 4}, "train"},
        {2, {5, 6, 13, 7}, {2, 4, 5, 2, 2, 1, 5, 4}, "test"},
    };
}

std::vector<float> synth_clip(int scene, int idx, int n, int fs,
                              std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(std::size_t(n), 0.0);
    const double dt = 1.0 / fs;

    if (scene == 0) {
        // Crowd murmur: slowly modulated mid-band noise plus two tones.
        double lp = 0.0;
        for (int i = 0; i < n; ++i) {
            const double t = i * dt;
            lp += 0.15 * (gauss(rng) - lp);
            const double mod = 0.6 + 0.4 * std::sin(2 * M_PI * 1.7 * t + idx);
            x[std::size_t(i)] =
                0.25 * lp * mod * std::sin(2 * M_PI * 900.0 * t) +
                0.08 * std::sin(2 * M_PI * 600.0 * t) +
                0.05 * std::sin(2 * M_PI * 1250.0 * t);
        }
    } else if (scene == 1) {
        // Birdsong: repeating upward chirps in the 3-6 kHz band over a faint
        // breeze.
        double breeze = 0.0;
        for (int i = 0; i < n; ++i) {
            const double t = i * dt;
            const double phase = std::fmod(t * 2.5 + 0.3 * idx, 1.0);
            double chirp = 0.0;
            if (phase < 0.35) {
                const double f = 3000.0 + 8000.0 * phase;
                chirp = std::sin(2 * M_PI * f * t) *
                        std::sin(M_PI * phase / 0.35);
            }
            breeze += 0.02 * (gauss(rng) - breeze);
            x[std::size_t(i)] = 0.3 * chirp + 0.1 * breeze;
        }
    } else {
        // Traffic: heavy low-passed rumble, engine hum, periodic honks.
        double r1 = 0.0, r2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double t = i * dt;
            r1 += 0.03 * (gauss(rng) - r1);
            r2 += 0.3 * (r1 - r2);
            const double honk_phase = std::fmod(t + 0.4 * idx, 1.5);
            const double honk =
                honk_phase < 0.2
                    ? std::sin(2 * M_PI * 420.0 * t) *
                          std::sin(M_PI * honk_phase / 0.2)
                    : 0.0;
            x[std::size_t(i)] = 2.2 * r2 +
                                0.12 * std::sin(2 * M_PI * 110.0 * t) +
                                0.15 * honk;
        }
    }

    double peak = 1e-9;
    for (double v : x) peak = std::max(peak, std::abs(v));
    std::vector<float> out(std::size_t(n), 0.0f);
    for (int i = 0; i < n; ++i)
        out[std::size_t(i)] = float(x[std::size_t(i)] / peak * 0.5);
    return out;
}

} // namespace

void make_fixture(const FixtureSpec& spec) {
    if (spec.n_clips != int(clip_plans().size()))
        throw ValidationError("fixture is defined for exactly " +
                              std::to_string(clip_plans().size()) + " clips");
    const fs::path root(spec.root);
    fs::create_directories(root / "audio");
    fs::create_directories(root / "tagger");

    std::mt19937_64 rng(spec.seed);
    const int n = int(std::lround(spec.duration_s * spec.sample_rate));
    const auto plans = clip_plans();

    // Calibration tone: 1 kHz sine, amplitude chosen well below full scale.
    {
        std::vector<float> cal(std::size_t(spec.sample_rate));
        for (int i = 0; i < spec.sample_rate; ++i)
            cal[std::size_t(i)] =
                0.05f * float(std::sin(2 * M_PI * 1000.0 * i /
                                       double(spec.sample_rate)));
        write_wav((root / "audio" / "calibration.wav").string(), cal,
                  spec.sample_rate);
    }

    std::ostringstream manifest;
    manifest << "clip_id,audio_path,scene";
    for (int e = 1; e <= kNumEvents; ++e) manifest << ",e" << e;
    for (int a = 1; a <= kNumAq; ++a) manifest << ",aq" << a;
    manifest << ",split\n";

    std::uniform_real_distribution<double> bg(0.0, 0.2);
    std::uniform_real_distribution<double> active(0.55, 0.95);

    for (int c = 0; c < spec.n_clips; ++c) {
        const ClipPlan& plan = plans[std::size_t(c)];
        std::ostringstream id;
        id << "clip_" << (c < 10 ? "0" : "") << c;
        const std::string clip_id = id.str();

        std::mt19937_64 clip_rng(spec.seed ^ (0x51ed2701ULL * (c + 1)));
        const std::vector<float> audio =
            synth_clip(plan.scene, c, n, spec.sample_rate, clip_rng);
        write_wav((root / "audio" / (clip_id + ".wav")).string(), audio,
                  spec.sample_rate);

        manifest << clip_id << ",audio/" << clip_id << ".wav,"
                 << kSceneNames[std::size_t(plan.scene)];
        std::array<int, kNumEvents> multihot{};
        for (int e : plan.events) multihot[std::size_t(e)] = 1;
        for (int e = 0; e < kNumEvents; ++e)
            manifest << ',' << multihot[std::size_t(e)];
        for (int a = 0; a < kNumAq; ++a) manifest << ',' << plan.aq[std::size_t(a)];
        manifest << ',' << plan.split << '\n';

        // Per-second tagger probabilities: active vocabulary classes high,
        // the rest below every binarization threshold's reach of 0.5.
        TaggerProbFile probs;
        probs.clip_id = clip_id;
        probs.granularity = ProbGranularity::per_second;
        const int seconds = std::max(1, int(spec.duration_s));
        for (int sidx = 0; sidx < seconds; ++sidx) {
            std::vector<double> row(std::size_t(kTaggerClasses), 0.0);
            for (int k = 0; k < kTaggerClasses; ++k)
                row[std::size_t(k)] = bg(clip_rng);
            for (int e : plan.events)
                row[std::size_t(tagger_index(e))] = active(clip_rng);
            probs.probs.push_back(std::move(row));
        }
        save_tagger_probs(probs, (root / "tagger" / (clip_id + ".txt")).string());
    }
    write_text_file((root / "manifest.csv").string(), manifest.str());

    // Tagger class names with the vocabulary at its fixed indices.
    {
        std::ostringstream names;
        std::vector<std::string> lookup{std::size_t(kTaggerClasses),
                                        std::string()};
        for (int k = 0; k < kTaggerClasses; ++k)
            lookup[std::size_t(k)] = "tagger_class_" + std::to_string(k);
        for (int v = 0; v < kNumEvents; ++v)
            lookup[std::size_t(tagger_index(v))] = kEventNames[std::size_t(v)];
        for (const std::string& name : lookup) names << name << '\n';
        write_text_file((root / "tagger" / "classes.txt").string(),
                        names.str());
    }
    // Masker-derived classes that stay in the vocabulary regardless of rank.
    write_text_file((root / "tagger" / "maskers.txt").string(),
                    "Bird\nWind\nWater\nTraffic\nSilence\n");

    // Caption ratings: two raters, expert vs system per clip.
    {
        std::mt19937_64 rrng(spec.seed ^ 0xabcdefULL);
        std::uniform_int_distribution<int> half(0, 1);
        std::ostringstream ratings;
        ratings << "rater_id,caption_id,source,dataset,P,R,F,C,I\n";
        for (int rater = 1; rater <= 2; ++rater)
            for (int c = 0; c < spec.n_clips; ++c)
                for (const char* source : {"expert", "system"}) {
                    const bool expert = std::string(source) == "expert";
                    const double p =
                        (expert ? 4.0 : 3.5) + 0.5 * half(rrng);
                    const double r =
                        (expert ? 4.0 : 3.0) + 0.5 * half(rrng);
                    const double f = expert ? 0.0 : -0.5 * half(rrng);
                    const double cc = -0.5 * half(rrng);
                    const double i = expert ? 0.0 : -0.5 * half(rrng);
                    ratings << "rater" << rater << ",clip_0" << c << ','
                            << source << ",fixture," << p << ',' << r << ','
                            << f << ',' << cc << ',' << i << '\n';
                }
        write_text_file((root / "ratings.csv").string(), ratings.str());
    }
}

} // namespace ssc

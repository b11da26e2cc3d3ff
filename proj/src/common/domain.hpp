#ifndef SSC_COMMON_DOMAIN_HPP
#define SSC_COMMON_DOMAIN_HPP

#include <array>
#include <string>

namespace ssc {

inline constexpr int kNumScenes = 3;
inline constexpr int kNumEvents = 15;
inline constexpr int kNumAq = 8;
inline constexpr int kTaggerClasses = 527;

inline const std::array<std::string, kNumScenes> kSceneNames = {
    "public square", "park", "street traffic"};

// Fixed 15-class audio event vocabulary, in corpus order.
inline const std::array<std::string, kNumEvents> kEventNames = {
    "Bird",
    "Animal",
    "Wind",
    "Water",
    "Natural sounds",
    "Vehicle",
    "Traffic",
    "Sounds of things",
    "Environment and background",
    "Outside, rural or natural",
    "Speech",
    "Human sounds",
    "Music",
    "Noise",
    "Silence"};

// Affective-quality order used by every 8-vector in the project.
inline const std::array<std::string, kNumAq> kAqNames = {
    "pleasant", "eventful", "chaotic",  "vibrant",
    "uneventful", "calm",   "annoying", "monotonous"};

enum AqIndex {
    kAqPleasant = 0,
    kAqEventful = 1,
    kAqChaotic = 2,
    kAqVibrant = 3,
    kAqUneventful = 4,
    kAqCalm = 5,
    kAqAnnoying = 6,
    kAqMonotonous = 7
};

int scene_index(const std::string& name); // -1 if unknown

struct LabelSet {
    int scene = 0;                            // index into kSceneNames
    std::array<int, kNumEvents> events{};     // multi-hot
    std::array<int, kNumAq> aq{};             // each in {1..5}
};

struct PredictionBundle {
    std::array<double, kNumScenes> scene_logits{};
    std::array<double, kNumScenes> scene_probs{};
    std::array<double, kNumEvents> event_probs{};
    double isop = 0.0;
    double isoe = 0.0;
    std::array<double, kNumAq> aq{};
};

} // namespace ssc

#endif

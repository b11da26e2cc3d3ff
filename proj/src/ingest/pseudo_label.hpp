#ifndef SSC_INGEST_PSEUDO_LABEL_HPP
#define SSC_INGEST_PSEUDO_LABEL_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ssc {

enum class ProbGranularity { per_second, per_clip };

// Precomputed tagger output for one clip: either one 527-prob row per second
// or a single clip-level row.
struct TaggerProbFile {
    std::string clip_id;
    ProbGranularity granularity = ProbGranularity::per_clip;
    std::vector<std::vector<double>> probs; // rows x classes
};

// Text format: first line "granularity per_second|per_clip", then one
// whitespace-separated probability row per line.
TaggerProbFile load_tagger_probs(const std::string& path,
                                 const std::string& clip_id,
                                 int expected_classes);
void save_tagger_probs(const TaggerProbFile& file, const std::string& path);

// bit i = 1 iff probs[i] > threshold (strictly).
std::vector<int> binarize_probs(const std::vector<double>& probs,
                                double threshold);

// Column sums over the corpus of hard label rows, sorted by count descending,
// ties broken by class index ascending.
std::vector<std::pair<int, std::int64_t>> rank_event_occurrences(
    const std::vector<std::vector<int>>& hard_labels);

// Union of the masker classes with the top-ranked classes, truncated to a
// fixed 15-name vocabulary. Selection: all maskers are kept, then the
// highest-ranked non-masker classes fill the remaining slots; the final list
// is ordered by rank position (count descending, index ascending).
std::vector<std::string> select_target_events(
    const std::vector<std::pair<int, std::int64_t>>& ranked,
    const std::vector<int>& masker_classes,
    const std::vector<std::string>& class_names);

} // namespace ssc

#endif

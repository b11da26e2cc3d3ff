#ifndef SSC_THUMBS_THUMBS_HPP
#define SSC_THUMBS_THUMBS_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "common/domain.hpp"
#include "thumbs/stats.hpp"

namespace ssc {

// One rater's judgement of one caption. P and R grade accuracy and coverage
// on [1,5]; the three penalties (fluency, conciseness, irrelevance) lie in
// [-2,0].
struct ThumbsRating {
    std::string rater_id;
    std::string caption_id;
    std::string source;  // "expert" or "system"
    std::string dataset; // e.g. "D1", "D2"
    double p = 0.0;
    double r = 0.0;
    double f = 0.0;
    double c = 0.0;
    double i = 0.0;
};

// Score = (P + R) / 2 + F + C + I; range checks throw RangeError.
double thumbs_score(const ThumbsRating& rating);

struct GroupStats {
    std::string source;
    std::string dataset;
    int n = 0;
    // mean/std per field: P, R, F, C, I, Score (unbiased sample std; 0 when
    // n == 1, flagged through n).
    std::array<double, 6> mean{};
    std::array<double, 6> stddev{};
};

// Per (source, dataset) group statistics, sorted by (source, dataset).
std::vector<GroupStats> aggregate(const std::vector<ThumbsRating>& ratings);

std::vector<ThumbsRating> load_ratings(const std::string& path);
void save_ratings(const std::string& path,
                  const std::vector<ThumbsRating>& ratings);

struct CorrelationCell {
    double rho = 0.0;
    double p = 1.0;
    int stars = 0;       // 0.05 / 0.01 / 0.001 thresholds
    bool defined = true; // false for constant columns
};

// Elementwise Spearman correlation of each event-probability column against
// each quality-rating column.
std::vector<std::array<CorrelationCell, kNumAq>> correlation_matrix(
    const std::vector<std::array<double, kNumEvents>>& event_probs,
    const std::vector<std::array<double, kNumAq>>& aq_values);

int significance_stars(double p);

// The test-selection gate: per-caption rater means are paired across
// sources; a Shapiro-Wilk check on the differences picks the paired t-test
// (normal) or the signed-rank test (non-normal, p < 0.05).
struct PairedComparison {
    std::string field;
    StatResult normality;
    StatResult test; // paired_t or wilcoxon_signed_rank
};

PairedComparison compare_sources(const std::vector<double>& expert,
                                 const std::vector<double>& system,
                                 const std::string& field);

} // namespace ssc

#endif

#ifndef SSC_TRAIN_METRICS_HPP
#define SSC_TRAIN_METRICS_HPP

#include <array>
#include <vector>

#include "common/domain.hpp"

namespace ssc {

// Rank-based AUC with ties counted as 0.5 (equivalently: average ranks).
// Throws DegenerateClassError when the labels contain only one class.
double rank_auc(const std::vector<double>& scores,
                const std::vector<int>& labels);

struct MetricReport {
    double asc_accuracy = 0.0;
    double aec_auc_macro = 0.0;
    // ISOP, ISOE, then the eight quality ratings (prediction vs 1..5 truth).
    std::array<double, 2 + kNumAq> mse_per_target{};
    double mse_mean_aq = 0.0;
    std::vector<int> skipped_event_classes; // single-class events in the split
};

// Predictions and truths are parallel, one entry per clip.
MetricReport evaluate_metrics(const std::vector<PredictionBundle>& predictions,
                              const std::vector<LabelSet>& truths);

} // namespace ssc

#endif

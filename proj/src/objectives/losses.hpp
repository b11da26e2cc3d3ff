#ifndef SSC_OBJECTIVES_LOSSES_HPP
#define SSC_OBJECTIVES_LOSSES_HPP

#include <array>

#include "common/domain.hpp"

namespace ssc {

inline constexpr int kNumTasks = 12;
// Tasks 0 and 1 (scene CE, event BCE) are the classification pair; the
// remaining ten are regressions and enter the weighted total with a 1/2.
inline constexpr int kNumClassificationTasks = 2;

struct LossVector {
    // L1..L12: CE scene, BCE events, MSE ISOP, MSE ISOE, MSE per AQ.
    std::array<double, kNumTasks> values{};
};

// Per-task losses for one clip. Truth ISOP/ISOE are derived from the truth
// AQ responses via the circumplex projections.
LossVector task_losses(const PredictionBundle& pred, const LabelSet& truth);

// Uncertainty weighting: sum_i<2 (L_i / s_i^2 + ln s_i)
//                      + sum_i>=2 (L_i / (2 s_i^2) + ln s_i).
double uncertainty_weighted_total(const LossVector& losses,
                                  const std::array<double, kNumTasks>& sigma);

} // namespace ssc

#endif

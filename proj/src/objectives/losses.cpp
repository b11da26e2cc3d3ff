#include "objectives/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "common/errors.hpp"
#include "objectives/circumplex.hpp"

namespace ssc {

namespace {

// Probability clamp for the cross-entropy terms.
constexpr double kProbEps = 1e-12;

double clamp01(double p) {
    return std::min(1.0 - kProbEps, std::max(kProbEps, p));
}

} // namespace

LossVector task_losses(const PredictionBundle& pred, const LabelSet& truth) {
    if (truth.scene < 0 || truth.scene >= kNumScenes)
        throw ShapeError("scene label index " + std::to_string(truth.scene) +
                         " out of range");
    LossVector out;

    out.values[0] = -std::log(clamp01(pred.scene_probs[truth.scene]));

    double bce = 0.0;
    for (int e = 0; e < kNumEvents; ++e) {
        const double p = clamp01(pred.event_probs[e]);
        bce += truth.events[e] ? -std::log(p) : -std::log(1.0 - p);
    }
    out.values[1] = bce / kNumEvents;

    std::array<double, kNumAq> r{};
    for (int i = 0; i < kNumAq; ++i) r[i] = double(truth.aq[i]);
    const double isop = iso_pleasantness(r);
    const double isoe = iso_eventfulness(r);
    out.values[2] = (pred.isop - isop) * (pred.isop - isop);
    out.values[3] = (pred.isoe - isoe) * (pred.isoe - isoe);

    for (int i = 0; i < kNumAq; ++i) {
        const double d = pred.aq[i] - r[i];
        out.values[4 + i] = d * d;
    }
    return out;
}

double uncertainty_weighted_total(const LossVector& losses,
                                  const std::array<double, kNumTasks>& sigma) {
    double total = 0.0;
    for (int i = 0; i < kNumTasks; ++i) {
        const double s = sigma[i];
        if (!(s > 0.0))
            throw DomainError("sigma[" + std::to_string(i) + "] = " +
                              std::to_string(s) + " must be positive");
        const double denom = i < kNumClassificationTasks ? s * s : 2.0 * s * s;
        total += losses.values[i] / denom + std::log(s);
    }
    return total;
}

} // namespace ssc

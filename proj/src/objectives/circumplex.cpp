#include "objectives/circumplex.hpp"

#include <cmath>
#include <string>

#include "common/errors.hpp"

namespace ssc {

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kNorm = 8.0 + std::sqrt(32.0);

void check_range(const std::array<double, kNumAq>& r) {
    for (int i = 0; i < kNumAq; ++i)
        if (!(r[i] >= 1.0 && r[i] <= 5.0))
            throw RangeError("affective response '" + kAqNames[i] + "' = " +
                             std::to_string(r[i]) + " outside [1, 5]");
}

} // namespace

double iso_pleasantness(const std::array<double, kNumAq>& r) {
    check_range(r);
    return (kSqrt2 * r[kAqPleasant] - kSqrt2 * r[kAqAnnoying] + r[kAqCalm] -
            r[kAqChaotic] + r[kAqVibrant] - r[kAqMonotonous]) /
           kNorm;
}

double iso_eventfulness(const std::array<double, kNumAq>& r) {
    check_range(r);
    return (kSqrt2 * r[kAqEventful] - kSqrt2 * r[kAqUneventful] - r[kAqCalm] +
            r[kAqChaotic] + r[kAqVibrant] - r[kAqMonotonous]) /
           kNorm;
}

} // namespace ssc

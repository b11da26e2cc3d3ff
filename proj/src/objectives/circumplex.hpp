#ifndef SSC_OBJECTIVES_CIRCUMPLEX_HPP
#define SSC_OBJECTIVES_CIRCUMPLEX_HPP

#include <array>

#include "common/domain.hpp"

namespace ssc {

// Projections of the eight affective-quality responses onto the circumplex
// axes. Inputs must lie in [1, 5]; outputs lie in [-1, 1].
double iso_pleasantness(const std::array<double, kNumAq>& r);
double iso_eventfulness(const std::array<double, kNumAq>& r);

inline std::array<double, kNumAq> aq_as_double(
    const std::array<int, kNumAq>& r) {
    std::array<double, kNumAq> out;
    for (int i = 0; i < kNumAq; ++i) out[i] = double(r[i]);
    return out;
}

inline double iso_pleasantness(const std::array<int, kNumAq>& r) {
    return iso_pleasantness(aq_as_double(r));
}
inline double iso_eventfulness(const std::array<int, kNumAq>& r) {
    return iso_eventfulness(aq_as_double(r));
}

} // namespace ssc

#endif

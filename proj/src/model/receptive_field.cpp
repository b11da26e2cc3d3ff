#include "model/receptive_field.hpp"

#include <algorithm>

#include "common/errors.hpp"
#include "features/types.hpp"

namespace ssc {

int receptive_field(const std::vector<RfLayer>& plan) {
    if (plan.empty()) throw ShapeError("receptive_field: empty layer plan");
    long rfs = 1;
    long jump = 1;
    for (const auto& layer : plan) {
        rfs += long(layer.kernel - 1) * layer.dilation * jump;
        jump *= layer.stride;
    }
    return int(rfs);
}

std::vector<RfLayer> branch_time_plan(int kernel, bool with_pooling) {
    std::vector<RfLayer> plan;
    for (int block = 0; block < 3; ++block) {
        const int dilation = block + 1;
        plan.push_back({LayerKind::conv, kernel, dilation, 1});
        plan.push_back({LayerKind::conv, kernel, dilation, 1});
        if (with_pooling) plan.push_back({LayerKind::pool, 2, 1, 2});
    }
    return plan;
}

int min_input_length_ms(const std::vector<int>& kernels) {
    if (kernels.empty()) throw ShapeError("min_input_length: no branch kernels");
    int frames = 0;
    for (int k : kernels)
        frames = std::max(frames, receptive_field(branch_time_plan(k)));
    return frames * kMelHopMs;
}

} // namespace ssc

#ifndef SSC_MODEL_RECEPTIVE_FIELD_HPP
#define SSC_MODEL_RECEPTIVE_FIELD_HPP

#include <vector>

namespace ssc {

enum class LayerKind { conv, pool };

struct RfLayer {
    LayerKind kind = LayerKind::conv;
    int kernel = 1;
    int dilation = 1;
    int stride = 1;
};

// Receptive field size (input frames per output unit) of a layer stack,
// accumulated as RFS = 1 + sum_i (k_i - 1) * r_i * jump_i with the jump
// multiplied by each layer's stride.
int receptive_field(const std::vector<RfLayer>& plan);

// The standard branch plan for a given time-axis kernel: three blocks of two
// dilated convolutions (rates 1, 2, 3) each followed by stride-2 pooling.
std::vector<RfLayer> branch_time_plan(int kernel, bool with_pooling = true);

// Largest branch receptive field times the mel hop (10 ms).
int min_input_length_ms(const std::vector<int>& kernels);

} // namespace ssc

#endif

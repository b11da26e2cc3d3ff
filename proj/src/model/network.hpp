#ifndef SSC_MODEL_NETWORK_HPP
#define SSC_MODEL_NETWORK_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "model/gated_gcn.hpp"
#include "model/layers.hpp"

namespace ssc {

struct ModelConfig {
    std::vector<int> kernels{3, 5, 7, 9}; // time kernel per branch pair
    std::vector<int> filters{16, 32, 64}; // conv filters per block
    int embed_dim = 64;                   // branch embedding width
    int common_dim = 768;                 // shared trunk width
    int head_hidden = 64;                 // hidden width of each task head

    std::uint64_t hash() const;
    std::string describe() const;
};

struct NetworkOutputs {
    Tensor scene_logits; // (N, 3)
    Tensor event_logits; // (N, 15)
    Tensor isop;         // (N, 1)
    Tensor isoe;         // (N, 1)
    Tensor aq;           // (N, 8)
};

// The acoustic model: four mel branches (square kernels 3/5/7/9) and four
// loudness branches (kernels (k,1)), each three blocks of two dilated
// convolutions (rates 1/2/3 on time) with batch norm, ReLU and stride-2
// pooling, global time averaging and a linear projection to embed_dim.
// The eight embeddings are fused by a gated graph layer (residual update),
// concatenated, passed through a common embedding and split into twelve
// heads: scene softmax logits, event logistic logits, two affect indices
// and eight scalar quality ratings. A 12-entry log-sigma parameter block
// carries the per-task uncertainty weights.
class SoundAQnet {
public:
    explicit SoundAQnet(ModelConfig cfg = {});

    // mel: (N, 1, T_mel, 64); loudness: (N, 1, T_loud, 1).
    NetworkOutputs forward(const Tensor& mel, const Tensor& loudness,
                           bool train);
    // Gradients with the same shapes as the forward outputs.
    void backward(const NetworkOutputs& grads);

    void zero_grad();
    std::vector<Param*> params();
    std::vector<NamedTensor> buffers();
    std::size_t num_params();
    // Scaled-normal (He) initialization of weights, zero biases, unit batch
    // norm gain, zero log-sigma; deterministic under the seed.
    void init_params(std::uint64_t seed);

    const ModelConfig& config() const { return cfg_; }
    Param& log_sigma() { return log_sigma_; }

    static constexpr int kBranchPairs = 4;
    static constexpr int kGraphNodes = 8;

private:
    ModelConfig cfg_;
    std::vector<std::unique_ptr<Sequential>> mel_branches_;
    std::vector<std::unique_ptr<Sequential>> loud_branches_;
    GatedGcn gcn_;
    Sequential trunk_;
    Sequential head_scene_, head_events_, head_isop_, head_isoe_;
    std::vector<std::unique_ptr<Sequential>> head_aq_;
    Param log_sigma_;

    int batch_ = 0;

    std::unique_ptr<Sequential> make_branch(const std::string& name,
                                            int kernel_t, int kernel_f,
                                            int pool_f, int in_freq) const;
    std::unique_ptr<Sequential> make_head(const std::string& name,
                                          int out_dim) const;
};

} // namespace ssc

#endif

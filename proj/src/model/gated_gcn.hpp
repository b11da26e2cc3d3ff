#ifndef SSC_MODEL_GATED_GCN_HPP
#define SSC_MODEL_GATED_GCN_HPP

#include <string>
#include <vector>

#include "model/layers.hpp"

namespace ssc {

// One gated graph-convolution layer over a fully connected graph of
// `nodes` nodes (self-edges included), feature width `dim`:
//
//   e0_ij  = We [h_i ; h_j]
//   ehat   = A e0_ij + B h_i + C h_j
//   e_ij   = e0_ij + ReLU(BN_e(ehat))
//   eta_ij = sigmoid(ehat_ij) / (sum_j' sigmoid(ehat_ij') + eps)
//   h'_i   = h_i + ReLU(BN_h(U h_i + sum_j eta_ij * V h_j))
//
// Input/output node features are (batch, nodes, dim).
class GatedGcn {
public:
    GatedGcn(std::string name, int nodes, int dim);

    Tensor forward(const Tensor& h, bool train);
    Tensor backward(const Tensor& grad_h_out);
    void collect_params(std::vector<Param*>& out);
    void collect_buffers(std::vector<NamedTensor>& out);

    static constexpr double kGateEps = 1e-8;

private:
    int nodes_, dim_;
    Linear edge_init_, a_, b_, c_, u_, v_;
    BatchNorm bn_e_, bn_h_;
    ReLU relu_e_, relu_h_;

    // forward caches
    int batch_ = 0;
    Tensor h_in_, ehat_, sig_, denom_, eta_, vh_;
};

} // namespace ssc

#endif

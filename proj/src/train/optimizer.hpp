#ifndef SSC_TRAIN_OPTIMIZER_HPP
#define SSC_TRAIN_OPTIMIZER_HPP

#include <vector>

#include "model/layers.hpp"

namespace ssc {

struct AdamConfig {
    double learning_rate = 5e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Adam with bias correction. Holds non-owning pointers to the parameters it
// updates; moment buffers are keyed by position.
class Adam {
public:
    Adam(std::vector<Param*> params, AdamConfig cfg = {});

    void step();
    void zero_grad();

private:
    std::vector<Param*> params_;
    AdamConfig cfg_;
    std::vector<std::vector<double>> m_, v_;
    long t_ = 0;
};

} // namespace ssc

#endif

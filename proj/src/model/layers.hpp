#ifndef SSC_MODEL_LAYERS_HPP
#define SSC_MODEL_LAYERS_HPP

#include <memory>
#include <string>
#include <vector>

#include "model/tensor.hpp"

namespace ssc {

struct Param {
    std::string name;
    Tensor value;
    Tensor grad;

    Param(std::string n, std::vector<int> shape)
        : name(std::move(n)), value(shape), grad(shape) {}
};

// Non-trained state that still belongs in a checkpoint (running statistics).
struct NamedTensor {
    std::string name;
    Tensor* tensor;
};

class Layer {
public:
    virtual ~Layer() = default;
    virtual Tensor forward(const Tensor& x, bool train) = 0;
    virtual Tensor backward(const Tensor& grad_out) = 0;
    virtual void collect_params(std::vector<Param*>& out) { (void)out; }
    virtual void collect_buffers(std::vector<NamedTensor>& out) { (void)out; }
};

// 2D convolution over (batch, channels, time, freq). Time axis: valid
// convolution with dilation; freq axis: same padding, dilation 1. Backed by
// im2col + GEMM.
class Conv2d : public Layer {
public:
    Conv2d(std::string name, int in_ch, int out_ch, int kernel_t, int kernel_f,
           int dilation_t);
    Tensor forward(const Tensor& x, bool train) override;
    Tensor backward(const Tensor& grad_out) override;
    void collect_params(std::vector<Param*>& out) override;

    Param weight; // (out_ch, in_ch, kt, kf)
    Param bias;   // (out_ch)

private:
    int in_ch_, out_ch_, kt_, kf_, dil_t_, pad_f_;
    Tensor input_;
    void im2col(const double* x, int t_in, int f_in, int t_out,
                std::vector<double>& col) const;
};

// Batch normalization; channels_first treats dim 1 of (N,C,...) as the
// channel axis, otherwise the last axis is normalized (feature vectors).
class BatchNorm : public Layer {
public:
    BatchNorm(std::string name, int channels, bool channels_first = true,
              double eps = 1e-5, double momentum = 0.1);
    Tensor forward(const Tensor& x, bool train) override;
    Tensor backward(const Tensor& grad_out) override;
    void collect_params(std::vector<Param*>& out) override;
    void collect_buffers(std::vector<NamedTensor>& out) override;

    Param gamma, beta;
    Tensor running_mean, running_var; // persisted, not trained

private:
    std::string name_;
    int channels_;
    bool channels_first_;
    double eps_, momentum_;
    bool trained_mode_ = true;
    Tensor input_, xhat_;
    std::vector<double> mean_, invstd_;
    // (rows, channel stride layout) of the last forward
    std::size_t group_count_ = 0;
    void index(const std::vector<int>& shape, std::size_t& outer,
               std::size_t& inner) const;
};

class ReLU : public Layer {
public:
    Tensor forward(const Tensor& x, bool train) override;
    Tensor backward(const Tensor& grad_out) override;

private:
    Tensor input_;
};

// Non-overlapping max pooling with kernel = stride (pool_t, pool_f).
class MaxPool2d : public Layer {
public:
    MaxPool2d(int pool_t, int pool_f);
    Tensor forward(const Tensor& x, bool train) override;
    Tensor backward(const Tensor& grad_out) override;

private:
    int pt_, pf_;
    std::vector<int> in_shape_;
    std::vector<std::size_t> argmax_;
};

// Mean over the time axis of (N,C,T,F), flattened to (N, C*F).
class GlobalAvgPoolTime : public Layer {
public:
    Tensor forward(const Tensor& x, bool train) override;
    Tensor backward(const Tensor& grad_out) override;

private:
    std::vector<int> in_shape_;
};

class Linear : public Layer {
public:
    Linear(std::string name, int in_dim, int out_dim);
    Tensor forward(const Tensor& x, bool train) override;
    Tensor backward(const Tensor& grad_out) override;
    void collect_params(std::vector<Param*>& out) override;

    Param weight; // (out, in)
    Param bias;   // (out)

private:
    int in_dim_, out_dim_;
    Tensor input_;
};

class Sequential : public Layer {
public:
    Sequential() = default;
    template <typename L, typename... Args>
    L* add(Args&&... args) {
        auto layer = std::make_unique<L>(std::forward<Args>(args)...);
        L* raw = layer.get();
        layers_.push_back(std::move(layer));
        return raw;
    }
    Tensor forward(const Tensor& x, bool train) override;
    Tensor backward(const Tensor& grad_out) override;
    void collect_params(std::vector<Param*>& out) override;
    void collect_buffers(std::vector<NamedTensor>& out) override;

private:
    std::vector<std::unique_ptr<Layer>> layers_;
};

} // namespace ssc

#endif

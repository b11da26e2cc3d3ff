#include "model/layers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "common/errors.hpp"

namespace ssc {

// --- Conv2d -----------------------------------------------------------------

Conv2d::Conv2d(std::string name, int in_ch, int out_ch, int kernel_t,
               int kernel_f, int dilation_t)
    : weight(name + ".weight", {out_ch, in_ch, kernel_t, kernel_f}),
      bias(name + ".bias", {out_ch}),
      in_ch_(in_ch),
      out_ch_(out_ch),
      kt_(kernel_t),
      kf_(kernel_f),
      dil_t_(dilation_t),
      pad_f_((kernel_f - 1) / 2) {
    if (kernel_f % 2 == 0) throw ShapeError("freq kernel must be odd");
}

void Conv2d::im2col(const double* x, int t_in, int f_in, int t_out,
                    std::vector<double>& col) const {
    // col is (in_ch*kt*kf) x (t_out*f_in), row-major.
    const std::size_t cols = std::size_t(t_out) * f_in;
    std::size_t r = 0;
    for (int c = 0; c < in_ch_; ++c) {
        const double* xc = x + std::size_t(c) * t_in * f_in;
        for (int i = 0; i < kt_; ++i) {
            for (int j = 0; j < kf_; ++j, ++r) {
                double* dst = col.data() + r * cols;
                const int df = j - pad_f_;
                for (int t = 0; t < t_out; ++t) {
                    const double* src = xc + std::size_t(t + i * dil_t_) * f_in;
                    for (int f = 0; f < f_in; ++f) {
                        const int sf = f + df;
                        dst[std::size_t(t) * f_in + f] =
                            (sf >= 0 && sf < f_in) ? src[sf] : 0.0;
                    }
                }
            }
        }
    }
}

Tensor Conv2d::forward(const Tensor& x, bool) {
    if (x.rank() != 4 || x.dim(1) != in_ch_)
        throw ShapeError("Conv2d expects (N," + std::to_string(in_ch_) +
                         ",T,F), got " + x.shape_str());
    const int n = x.dim(0), t_in = x.dim(2), f_in = x.dim(3);
    const int t_out = t_in - (kt_ - 1) * dil_t_;
    if (t_out < 1)
        throw InputTooShortError("conv input of " + std::to_string(t_in) +
                                 " frames is below the kernel span of " +
                                 std::to_string((kt_ - 1) * dil_t_ + 1));
    input_ = x;
    Tensor y({n, out_ch_, t_out, f_in});

    const int rows = in_ch_ * kt_ * kf_;
    const std::size_t cols = std::size_t(t_out) * f_in;
    std::vector<double> col(std::size_t(rows) * cols);
    for (int s = 0; s < n; ++s) {
        im2col(x.data() + std::size_t(s) * in_ch_ * t_in * f_in, t_in, f_in,
               t_out, col);
        double* ys = y.data() + std::size_t(s) * out_ch_ * cols;
        gemm(false, false, out_ch_, int(cols), rows, 1.0, weight.value.data(),
             col.data(), 0.0, ys);
        for (int o = 0; o < out_ch_; ++o) {
            const double b = bias.value[o];
            double* yo = ys + std::size_t(o) * cols;
            for (std::size_t i = 0; i < cols; ++i) yo[i] += b;
        }
    }
    return y;
}

Tensor Conv2d::backward(const Tensor& g) {
    const int n = input_.dim(0), t_in = input_.dim(2), f_in = input_.dim(3);
    const int t_out = g.dim(2);
    const int rows = in_ch_ * kt_ * kf_;
    const std::size_t cols = std::size_t(t_out) * f_in;

    Tensor dx(input_.shape());
    std::vector<double> col(std::size_t(rows) * cols);
    std::vector<double> dcol(std::size_t(rows) * cols);

    for (int s = 0; s < n; ++s) {
        const double* gs = g.data() + std::size_t(s) * out_ch_ * cols;
        // bias grad
        for (int o = 0; o < out_ch_; ++o) {
            const double* go = gs + std::size_t(o) * cols;
            double acc = 0.0;
            for (std::size_t i = 0; i < cols; ++i) acc += go[i];
            bias.grad[o] += acc;
        }
        // weight grad: dW += g(o x cols) * col^T
        im2col(input_.data() + std::size_t(s) * in_ch_ * t_in * f_in, t_in,
               f_in, t_out, col);
        gemm(false, true, out_ch_, rows, int(cols), 1.0, gs, col.data(), 1.0,
             weight.grad.data());
        // input grad: dcol = W^T * g, then col2im scatter
        gemm(true, false, rows, int(cols), out_ch_, 1.0, weight.value.data(),
             gs, 0.0, dcol.data());
        double* dxs = dx.data() + std::size_t(s) * in_ch_ * t_in * f_in;
        std::size_t r = 0;
        for (int c = 0; c < in_ch_; ++c) {
            double* dxc = dxs + std::size_t(c) * t_in * f_in;
            for (int i = 0; i < kt_; ++i) {
                for (int j = 0; j < kf_; ++j, ++r) {
                    const double* src = dcol.data() + r * cols;
                    const int df = j - pad_f_;
                    for (int t = 0; t < t_out; ++t) {
                        double* dst = dxc + std::size_t(t + i * dil_t_) * f_in;
                        for (int f = 0; f < f_in; ++f) {
                            const int sf = f + df;
                            if (sf >= 0 && sf < f_in)
                                dst[sf] += src[std::size_t(t) * f_in + f];
                        }
                    }
                }
            }
        }
    }
    return dx;
}

void Conv2d::collect_params(std::vector<Param*>& out) {
    out.push_back(&weight);
    out.push_back(&bias);
}

// --- BatchNorm ---------------------------------------------------------------

BatchNorm::BatchNorm(std::string name, int channels, bool channels_first,
                     double eps, double momentum)
    : gamma(name + ".gamma", {channels}),
      beta(name + ".beta", {channels}),
      running_mean({channels}),
      running_var({channels}),
      name_(std::move(name)),
      channels_(channels),
      channels_first_(channels_first),
      eps_(eps),
      momentum_(momentum) {
    gamma.value.fill(1.0);
    running_var.fill(1.0);
}

void BatchNorm::index(const std::vector<int>& shape, std::size_t& outer,
                      std::size_t& inner) const {
    // Element layout: outer x channels x inner.
    if (channels_first_) {
        if (shape.size() < 2 || shape[1] != channels_)
            throw ShapeError("BatchNorm channel mismatch");
        outer = std::size_t(shape[0]);
        inner = 1;
        for (std::size_t i = 2; i < shape.size(); ++i) inner *= std::size_t(shape[i]);
    } else {
        if (shape.empty() || shape.back() != channels_)
            throw ShapeError("BatchNorm feature-dim mismatch");
        outer = 1;
        for (std::size_t i = 0; i + 1 < shape.size(); ++i)
            outer *= std::size_t(shape[i]);
        inner = 1;
    }
}

Tensor BatchNorm::forward(const Tensor& x, bool train) {
    std::size_t outer, inner;
    index(x.shape(), outer, inner);
    const std::size_t m = outer * inner; // elements per channel
    trained_mode_ = train;
    input_ = x;
    mean_.assign(channels_, 0.0);
    invstd_.assign(channels_, 0.0);
    group_count_ = m;

    auto idx = [&](std::size_t o, int c, std::size_t i) {
        return (o * std::size_t(channels_) + std::size_t(c)) * inner + i;
    };

    if (train) {
        for (int c = 0; c < channels_; ++c) {
            double mu = 0.0;
            for (std::size_t o = 0; o < outer; ++o)
                for (std::size_t i = 0; i < inner; ++i) mu += x[idx(o, c, i)];
            mu /= double(m);
            double var = 0.0;
            for (std::size_t o = 0; o < outer; ++o)
                for (std::size_t i = 0; i < inner; ++i) {
                    const double d = x[idx(o, c, i)] - mu;
                    var += d * d;
                }
            var /= double(m);
            mean_[c] = mu;
            invstd_[c] = 1.0 / std::sqrt(var + eps_);
            running_mean[c] += momentum_ * (mu - running_mean[c]);
            running_var[c] += momentum_ * (var - running_var[c]);
        }
    } else {
        for (int c = 0; c < channels_; ++c) {
            mean_[c] = running_mean[c];
            invstd_[c] = 1.0 / std::sqrt(running_var[c] + eps_);
        }
    }

    Tensor y(x.shape());
    xhat_ = Tensor(x.shape());
    for (int c = 0; c < channels_; ++c) {
        const double mu = mean_[c], is = invstd_[c];
        const double gm = gamma.value[c], bt = beta.value[c];
        for (std::size_t o = 0; o < outer; ++o)
            for (std::size_t i = 0; i < inner; ++i) {
                const std::size_t p = idx(o, c, i);
                const double xh = (x[p] - mu) * is;
                xhat_[p] = xh;
                y[p] = gm * xh + bt;
            }
    }
    return y;
}

Tensor BatchNorm::backward(const Tensor& g) {
    std::size_t outer, inner;
    index(input_.shape(), outer, inner);
    const double m = double(group_count_);
    auto idx = [&](std::size_t o, int c, std::size_t i) {
        return (o * std::size_t(channels_) + std::size_t(c)) * inner + i;
    };

    Tensor dx(input_.shape());
    for (int c = 0; c < channels_; ++c) {
        double sum_g = 0.0, sum_gx = 0.0;
        for (std::size_t o = 0; o < outer; ++o)
            for (std::size_t i = 0; i < inner; ++i) {
                const std::size_t p = idx(o, c, i);
                sum_g += g[p];
                sum_gx += g[p] * xhat_[p];
            }
        gamma.grad[c] += sum_gx;
        beta.grad[c] += sum_g;

        const double gm = gamma.value[c], is = invstd_[c];
        if (trained_mode_) {
            for (std::size_t o = 0; o < outer; ++o)
                for (std::size_t i = 0; i < inner; ++i) {
                    const std::size_t p = idx(o, c, i);
                    dx[p] = gm * is / m *
                            (m * g[p] - sum_g - xhat_[p] * sum_gx);
                }
        } else {
            for (std::size_t o = 0; o < outer; ++o)
                for (std::size_t i = 0; i < inner; ++i) {
                    const std::size_t p = idx(o, c, i);
                    dx[p] = gm * is * g[p];
                }
        }
    }
    return dx;
}

void BatchNorm::collect_params(std::vector<Param*>& out) {
    out.push_back(&gamma);
    out.push_back(&beta);
}

void BatchNorm::collect_buffers(std::vector<NamedTensor>& out) {
    out.push_back({name_ + ".running_mean", &running_mean});
    out.push_back({name_ + ".running_var", &running_var});
}

// --- ReLU ---------------------------------------------------------------------

Tensor ReLU::forward(const Tensor& x, bool) {
    input_ = x;
    Tensor y(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
    return y;
}

Tensor ReLU::backward(const Tensor& g) {
    Tensor dx(input_.shape());
    for (std::size_t i = 0; i < g.size(); ++i)
        dx[i] = input_[i] > 0.0 ? g[i] : 0.0;
    return dx;
}

// --- MaxPool2d ------------------------------------------------------------------

MaxPool2d::MaxPool2d(int pool_t, int pool_f) : pt_(pool_t), pf_(pool_f) {}

Tensor MaxPool2d::forward(const Tensor& x, bool) {
    if (x.rank() != 4) throw ShapeError("MaxPool2d expects rank-4 input");
    const int n = x.dim(0), c = x.dim(1), t = x.dim(2), f = x.dim(3);
    const int to = t / pt_, fo = f / pf_;
    if (to < 1 || fo < 1)
        throw InputTooShortError("pooling input " + x.shape_str() +
                                 " smaller than the pooling window");
    in_shape_ = x.shape();
    Tensor y({n, c, to, fo});
    argmax_.assign(y.size(), 0);
    for (int s = 0; s < n; ++s)
        for (int ch = 0; ch < c; ++ch) {
            const std::size_t base = (std::size_t(s) * c + ch) * t * f;
            const std::size_t obase = (std::size_t(s) * c + ch) * std::size_t(to) * fo;
            for (int ot = 0; ot < to; ++ot)
                for (int of = 0; of < fo; ++of) {
                    double best = -std::numeric_limits<double>::infinity();
                    std::size_t best_idx = 0;
                    for (int i = 0; i < pt_; ++i)
                        for (int j = 0; j < pf_; ++j) {
                            const std::size_t p =
                                base + std::size_t(ot * pt_ + i) * f + of * pf_ + j;
                            if (x[p] > best) {
                                best = x[p];
                                best_idx = p;
                            }
                        }
                    const std::size_t op = obase + std::size_t(ot) * fo + of;
                    y[op] = best;
                    argmax_[op] = best_idx;
                }
        }
    return y;
}

Tensor MaxPool2d::backward(const Tensor& g) {
    Tensor dx(in_shape_);
    for (std::size_t i = 0; i < g.size(); ++i) dx[argmax_[i]] += g[i];
    return dx;
}

// --- GlobalAvgPoolTime -----------------------------------------------------------

Tensor GlobalAvgPoolTime::forward(const Tensor& x, bool) {
    if (x.rank() != 4) throw ShapeError("GlobalAvgPoolTime expects rank-4 input");
    const int n = x.dim(0), c = x.dim(1), t = x.dim(2), f = x.dim(3);
    in_shape_ = x.shape();
    Tensor y({n, c * f});
    for (int s = 0; s < n; ++s)
        for (int ch = 0; ch < c; ++ch)
            for (int ff = 0; ff < f; ++ff) {
                double acc = 0.0;
                for (int tt = 0; tt < t; ++tt)
                    acc += x[((std::size_t(s) * c + ch) * t + tt) * f + ff];
                y[std::size_t(s) * c * f + std::size_t(ch) * f + ff] =
                    acc / double(t);
            }
    return y;
}

Tensor GlobalAvgPoolTime::backward(const Tensor& g) {
    const int n = in_shape_[0], c = in_shape_[1], t = in_shape_[2],
              f = in_shape_[3];
    Tensor dx(in_shape_);
    for (int s = 0; s < n; ++s)
        for (int ch = 0; ch < c; ++ch)
            for (int ff = 0; ff < f; ++ff) {
                const double gv =
                    g[std::size_t(s) * c * f + std::size_t(ch) * f + ff] /
                    double(t);
                for (int tt = 0; tt < t; ++tt)
                    dx[((std::size_t(s) * c + ch) * t + tt) * f + ff] = gv;
            }
    return dx;
}

// --- Linear --------------------------------------------------------------------

Linear::Linear(std::string name, int in_dim, int out_dim)
    : weight(name + ".weight", {out_dim, in_dim}),
      bias(name + ".bias", {out_dim}),
      in_dim_(in_dim),
      out_dim_(out_dim) {}

Tensor Linear::forward(const Tensor& x, bool) {
    if (x.rank() != 2 || x.dim(1) != in_dim_)
        throw ShapeError("Linear expects (N," + std::to_string(in_dim_) +
                         "), got " + x.shape_str());
    input_ = x;
    const int n = x.dim(0);
    Tensor y({n, out_dim_});
    gemm(false, true, n, out_dim_, in_dim_, 1.0, x.data(), weight.value.data(),
         0.0, y.data());
    for (int s = 0; s < n; ++s)
        for (int o = 0; o < out_dim_; ++o)
            y[std::size_t(s) * out_dim_ + o] += bias.value[o];
    return y;
}

Tensor Linear::backward(const Tensor& g) {
    const int n = input_.dim(0);
    // dW += g^T x, db += sum g, dx = g W
    gemm(true, false, out_dim_, in_dim_, n, 1.0, g.data(), input_.data(), 1.0,
         weight.grad.data());
    for (int s = 0; s < n; ++s)
        for (int o = 0; o < out_dim_; ++o)
            bias.grad[o] += g[std::size_t(s) * out_dim_ + o];
    Tensor dx({n, in_dim_});
    gemm(false, false, n, in_dim_, out_dim_, 1.0, g.data(),
         weight.value.data(), 0.0, dx.data());
    return dx;
}

void Linear::collect_params(std::vector<Param*>& out) {
    out.push_back(&weight);
    out.push_back(&bias);
}

// --- Sequential -------------------------------------------------------------------

Tensor Sequential::forward(const Tensor& x, bool train) {
    Tensor cur = x;
    for (auto& l : layers_) cur = l->forward(cur, train);
    return cur;
}

Tensor Sequential::backward(const Tensor& g) {
    Tensor cur = g;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it)
        cur = (*it)->backward(cur);
    return cur;
}

void Sequential::collect_params(std::vector<Param*>& out) {
    for (auto& l : layers_) l->collect_params(out);
}

void Sequential::collect_buffers(std::vector<NamedTensor>& out) {
    for (auto& l : layers_) l->collect_buffers(out);
}

} // namespace ssc

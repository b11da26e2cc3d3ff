#include "model/network.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "common/domain.hpp"
#include "common/errors.hpp"
#include "common/hashing.hpp"
#include "features/types.hpp"

namespace ssc {

std::string ModelConfig::describe() const {
    std::ostringstream ss;
    ss << "kernels=";
    for (std::size_t i = 0; i < kernels.size(); ++i)
        ss << (i ? "," : "") << kernels[i];
    ss << ";filters=";
    for (std::size_t i = 0; i < filters.size(); ++i)
        ss << (i ? "," : "") << filters[i];
    ss << ";embed_dim=" << embed_dim << ";common_dim=" << common_dim
       << ";head_hidden=" << head_hidden;
    return ss.str();
}

std::uint64_t ModelConfig::hash() const { return fnv1a64(describe()); }

std::unique_ptr<Sequential> SoundAQnet::make_branch(const std::string& name,
                                                    int kernel_t, int kernel_f,
                                                    int pool_f,
                                                    int in_freq) const {
    auto seq = std::make_unique<Sequential>();
    int in_ch = 1;
    int freq = in_freq;
    for (std::size_t block = 0; block < cfg_.filters.size(); ++block) {
        const int out_ch = cfg_.filters[block];
        const int dilation = int(block) + 1;
        const std::string base = name + ".block" + std::to_string(block + 1);
        seq->add<Conv2d>(base + ".conv1", in_ch, out_ch, kernel_t, kernel_f,
                         dilation);
        seq->add<BatchNorm>(base + ".bn1", out_ch);
        seq->add<ReLU>();
        seq->add<Conv2d>(base + ".conv2", out_ch, out_ch, kernel_t, kernel_f,
                         dilation);
        seq->add<BatchNorm>(base + ".bn2", out_ch);
        seq->add<ReLU>();
        seq->add<MaxPool2d>(2, pool_f);
        in_ch = out_ch;
        freq /= pool_f;
    }
    seq->add<GlobalAvgPoolTime>();
    seq->add<Linear>(name + ".embed", in_ch * freq, cfg_.embed_dim);
    return seq;
}

std::unique_ptr<Sequential> SoundAQnet::make_head(const std::string& name,
                                                  int out_dim) const {
    auto seq = std::make_unique<Sequential>();
    seq->add<Linear>(name + ".hidden", cfg_.common_dim, cfg_.head_hidden);
    seq->add<ReLU>();
    seq->add<Linear>(name + ".out", cfg_.head_hidden, out_dim);
    return seq;
}

SoundAQnet::SoundAQnet(ModelConfig cfg)
    : cfg_(std::move(cfg)),
      gcn_("gcn", kGraphNodes, cfg_.embed_dim),
      log_sigma_("uncertainty.log_sigma", {12}) {
    if (int(cfg_.kernels.size()) != kBranchPairs)
        throw ShapeError("model expects four branch kernels");
    for (int b = 0; b < kBranchPairs; ++b) {
        const std::string k = std::to_string(cfg_.kernels[b]);
        mel_branches_.push_back(make_branch("mel_k" + k, cfg_.kernels[b],
                                            cfg_.kernels[b], 2, kMelBands));
        loud_branches_.push_back(
            make_branch("loud_k" + k, cfg_.kernels[b], 1, 1, 1));
    }
    trunk_.add<Linear>("trunk.embed", kGraphNodes * cfg_.embed_dim,
                       cfg_.common_dim);
    trunk_.add<ReLU>();
    head_scene_ = std::move(*make_head("head.scene", kNumScenes));
    head_events_ = std::move(*make_head("head.events", kNumEvents));
    head_isop_ = std::move(*make_head("head.isop", 1));
    head_isoe_ = std::move(*make_head("head.isoe", 1));
    for (int a = 0; a < kNumAq; ++a)
        head_aq_.push_back(make_head("head.aq_" + std::string(kAqNames[a]), 1));
}

NetworkOutputs SoundAQnet::forward(const Tensor& mel, const Tensor& loudness,
                                   bool train) {
    if (mel.rank() != 4 || mel.dim(1) != 1 || mel.dim(3) != kMelBands)
        throw ShapeError("mel input must be (N,1,T," +
                         std::to_string(kMelBands) + "), got " +
                         mel.shape_str());
    if (loudness.rank() != 4 || loudness.dim(1) != 1 || loudness.dim(3) != 1)
        throw ShapeError("loudness input must be (N,1,T,1), got " +
                         loudness.shape_str());
    if (mel.dim(0) != loudness.dim(0))
        throw ShapeError("mel/loudness batch mismatch");
    const int n = mel.dim(0);
    batch_ = n;

    Tensor h({n, kGraphNodes, cfg_.embed_dim});
    for (int b = 0; b < kBranchPairs; ++b) {
        Tensor em = mel_branches_[b]->forward(mel, train);        // (N, d)
        Tensor el = loud_branches_[b]->forward(loudness, train);  // (N, d)
        for (int s = 0; s < n; ++s)
            for (int d = 0; d < cfg_.embed_dim; ++d) {
                h[(std::size_t(s) * kGraphNodes + b) * cfg_.embed_dim + d] =
                    em[std::size_t(s) * cfg_.embed_dim + d];
                h[(std::size_t(s) * kGraphNodes + kBranchPairs + b) *
                      cfg_.embed_dim +
                  d] = el[std::size_t(s) * cfg_.embed_dim + d];
            }
    }

    Tensor fused = gcn_.forward(h, train); // (N, 8, d), residual inside
    Tensor concat = fused.reshaped({n, kGraphNodes * cfg_.embed_dim});
    Tensor common = trunk_.forward(concat, train);

    NetworkOutputs out;
    out.scene_logits = head_scene_.forward(common, train);
    out.event_logits = head_events_.forward(common, train);
    out.isop = head_isop_.forward(common, train);
    out.isoe = head_isoe_.forward(common, train);
    out.aq = Tensor({n, kNumAq});
    for (int a = 0; a < kNumAq; ++a) {
        Tensor ya = head_aq_[a]->forward(common, train); // (N, 1)
        for (int s = 0; s < n; ++s)
            out.aq[std::size_t(s) * kNumAq + a] = ya[s];
    }
    return out;
}

void SoundAQnet::backward(const NetworkOutputs& grads) {
    const int n = batch_;
    Tensor dcommon = head_scene_.backward(grads.scene_logits);
    {
        Tensor t = head_events_.backward(grads.event_logits);
        for (std::size_t p = 0; p < t.size(); ++p) dcommon[p] += t[p];
        t = head_isop_.backward(grads.isop);
        for (std::size_t p = 0; p < t.size(); ++p) dcommon[p] += t[p];
        t = head_isoe_.backward(grads.isoe);
        for (std::size_t p = 0; p < t.size(); ++p) dcommon[p] += t[p];
        for (int a = 0; a < kNumAq; ++a) {
            Tensor ga({n, 1});
            for (int s = 0; s < n; ++s)
                ga[s] = grads.aq[std::size_t(s) * kNumAq + a];
            t = head_aq_[a]->backward(ga);
            for (std::size_t p = 0; p < t.size(); ++p) dcommon[p] += t[p];
        }
    }

    Tensor dconcat = trunk_.backward(dcommon);
    Tensor dh = gcn_.backward(dconcat.reshaped({n, kGraphNodes, cfg_.embed_dim}));

    for (int b = 0; b < kBranchPairs; ++b) {
        Tensor gm({n, cfg_.embed_dim});
        Tensor gl({n, cfg_.embed_dim});
        for (int s = 0; s < n; ++s)
            for (int d = 0; d < cfg_.embed_dim; ++d) {
                gm[std::size_t(s) * cfg_.embed_dim + d] =
                    dh[(std::size_t(s) * kGraphNodes + b) * cfg_.embed_dim + d];
                gl[std::size_t(s) * cfg_.embed_dim + d] =
                    dh[(std::size_t(s) * kGraphNodes + kBranchPairs + b) *
                           cfg_.embed_dim +
                       d];
            }
        mel_branches_[b]->backward(gm);
        loud_branches_[b]->backward(gl);
    }
}

std::vector<Param*> SoundAQnet::params() {
    std::vector<Param*> out;
    for (auto& br : mel_branches_) br->collect_params(out);
    for (auto& br : loud_branches_) br->collect_params(out);
    gcn_.collect_params(out);
    trunk_.collect_params(out);
    head_scene_.collect_params(out);
    head_events_.collect_params(out);
    head_isop_.collect_params(out);
    head_isoe_.collect_params(out);
    for (auto& hd : head_aq_) hd->collect_params(out);
    out.push_back(&log_sigma_);
    return out;
}

std::vector<NamedTensor> SoundAQnet::buffers() {
    std::vector<NamedTensor> out;
    for (auto& br : mel_branches_) br->collect_buffers(out);
    for (auto& br : loud_branches_) br->collect_buffers(out);
    gcn_.collect_buffers(out);
    return out;
}

std::size_t SoundAQnet::num_params() {
    std::size_t n = 0;
    for (Param* p : params()) n += p->value.size();
    return n;
}

void SoundAQnet::zero_grad() {
    for (Param* p : params()) p->grad.fill(0.0);
}

void SoundAQnet::init_params(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Param* p : params()) {
        Tensor& v = p->value;
        if (p->name == "uncertainty.log_sigma") {
            v.fill(0.0); // sigma = 1
        } else if (v.rank() == 4) {
            // conv weight (O, C, kt, kf): fan-in scaled normal
            const double scale =
                std::sqrt(2.0 / double(v.dim(1) * v.dim(2) * v.dim(3)));
            for (std::size_t i = 0; i < v.size(); ++i)
                v[i] = scale * normal(rng);
        } else if (v.rank() == 2) {
            const double scale = std::sqrt(2.0 / double(v.dim(1)));
            for (std::size_t i = 0; i < v.size(); ++i)
                v[i] = scale * normal(rng);
        } else if (p->name.size() >= 6 &&
                   p->name.compare(p->name.size() - 6, 6, ".gamma") == 0) {
            v.fill(1.0);
        } else {
            v.fill(0.0); // biases, beta
        }
        p->grad.fill(0.0);
    }
}

} // namespace ssc

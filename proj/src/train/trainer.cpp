#include "train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "common/errors.hpp"
#include "objectives/circumplex.hpp"

#include "json.hpp"

namespace ssc {

bool early_stop_check(const TrainHistory& history, int epoch,
                      const TrainConfig& cfg) {
    if (int(history.epochs.size()) < epoch)
        throw ValidationError("early_stop_check: history shorter than epoch");
    if (epoch < cfg.patience_start_epoch) return false;
    // Running best over epochs 1..epoch (strict improvement moves it).
    int best = 1;
    double best_val = history.epochs[0].val_isop_loss;
    for (int e = 2; e <= epoch; ++e) {
        const double v = history.epochs[e - 1].val_isop_loss;
        if (v < best_val) {
            best_val = v;
            best = e;
        }
    }
    const int window_start = std::max(best, cfg.patience_start_epoch);
    return epoch - window_start >= cfg.patience;
}

std::vector<PredictionBundle> to_predictions(const NetworkOutputs& out) {
    const int n = out.scene_logits.dim(0);
    std::vector<PredictionBundle> preds(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        PredictionBundle& pb = preds[std::size_t(s)];
        double mx = out.scene_logits[std::size_t(s) * kNumScenes];
        for (int k = 1; k < kNumScenes; ++k)
            mx = std::max(mx, out.scene_logits[std::size_t(s) * kNumScenes + k]);
        double z = 0.0;
        for (int k = 0; k < kNumScenes; ++k) {
            pb.scene_logits[k] = out.scene_logits[std::size_t(s) * kNumScenes + k];
            pb.scene_probs[k] = std::exp(pb.scene_logits[k] - mx);
            z += pb.scene_probs[k];
        }
        for (int k = 0; k < kNumScenes; ++k) pb.scene_probs[k] /= z;
        for (int e = 0; e < kNumEvents; ++e)
            pb.event_probs[e] =
                1.0 /
                (1.0 + std::exp(-out.event_logits[std::size_t(s) * kNumEvents + e]));
        pb.isop = out.isop[std::size_t(s)];
        pb.isoe = out.isoe[std::size_t(s)];
        for (int a = 0; a < kNumAq; ++a)
            pb.aq[a] = out.aq[std::size_t(s) * kNumAq + a];
    }
    return preds;
}

void make_batch(const std::vector<TrainSample>& samples,
                const std::vector<std::size_t>& indices, Tensor& mel,
                Tensor& loudness) {
    if (indices.empty()) throw EmptySplitError("make_batch: empty batch");
    int t_mel = samples[indices[0]].features.mel.n_frames;
    int t_loud = samples[indices[0]].features.loudness.n_frames;
    for (std::size_t i : indices) {
        t_mel = std::min(t_mel, samples[i].features.mel.n_frames);
        t_loud = std::min(t_loud, samples[i].features.loudness.n_frames);
    }
    const int b = int(indices.size());
    mel = Tensor({b, 1, t_mel, kMelBands});
    loudness = Tensor({b, 1, t_loud, 1});
    for (int s = 0; s < b; ++s) {
        const FeaturePair& f = samples[indices[std::size_t(s)]].features;
        double* md = mel.data() + std::size_t(s) * t_mel * kMelBands;
        for (int t = 0; t < t_mel; ++t)
            for (int k = 0; k < kMelBands; ++k)
                md[std::size_t(t) * kMelBands + k] = f.mel.at(t, k);
        double* ld = loudness.data() + std::size_t(s) * t_loud;
        for (int t = 0; t < t_loud; ++t) ld[t] = f.loudness.values[t];
    }
}

BatchObjective batch_objective(const NetworkOutputs& out,
                               const std::vector<const LabelSet*>& truth,
                               SoundAQnet& net, bool accumulate_sigma_grad) {
    const int b = out.scene_logits.dim(0);
    if (int(truth.size()) != b)
        throw ShapeError("batch_objective: label count mismatch");

    std::array<double, kNumTasks> sigma;
    std::array<double, kNumTasks> inv_sq; // e^{-2 log sigma} = 1/sigma^2
    for (int i = 0; i < kNumTasks; ++i) {
        const double s = net.log_sigma().value[i];
        sigma[i] = std::exp(s);
        inv_sq[i] = std::exp(-2.0 * s);
    }

    const std::vector<PredictionBundle> preds = to_predictions(out);

    BatchObjective res;
    for (int s = 0; s < b; ++s) {
        const LossVector lv = task_losses(preds[std::size_t(s)], *truth[s]);
        for (int i = 0; i < kNumTasks; ++i)
            res.mean_losses.values[i] += lv.values[i] / double(b);
    }
    res.total = uncertainty_weighted_total(res.mean_losses, sigma);

    res.output_grads.scene_logits = Tensor({b, kNumScenes});
    res.output_grads.event_logits = Tensor({b, kNumEvents});
    res.output_grads.isop = Tensor({b, 1});
    res.output_grads.isoe = Tensor({b, 1});
    res.output_grads.aq = Tensor({b, kNumAq});
    for (int s = 0; s < b; ++s) {
        const PredictionBundle& pb = preds[std::size_t(s)];
        const LabelSet& y = *truth[s];
        for (int k = 0; k < kNumScenes; ++k)
            res.output_grads.scene_logits[std::size_t(s) * kNumScenes + k] =
                inv_sq[0] * (pb.scene_probs[k] - double(k == y.scene)) /
                double(b);
        for (int e = 0; e < kNumEvents; ++e)
            res.output_grads.event_logits[std::size_t(s) * kNumEvents + e] =
                inv_sq[1] * (pb.event_probs[e] - double(y.events[e])) /
                double(kNumEvents * b);
        const double tp = iso_pleasantness(y.aq);
        const double te = iso_eventfulness(y.aq);
        // Regression tasks carry the 1/(2 sigma^2) weight, so the squared
        // error's factor 2 cancels.
        res.output_grads.isop[std::size_t(s)] =
            inv_sq[2] * (pb.isop - tp) / double(b);
        res.output_grads.isoe[std::size_t(s)] =
            inv_sq[3] * (pb.isoe - te) / double(b);
        for (int a = 0; a < kNumAq; ++a)
            res.output_grads.aq[std::size_t(s) * kNumAq + a] =
                inv_sq[4 + a] * (pb.aq[a] - double(y.aq[a])) / double(b);
    }

    if (accumulate_sigma_grad) {
        Tensor& g = net.log_sigma().grad;
        for (int i = 0; i < kNumTasks; ++i) {
            const double L = res.mean_losses.values[i];
            g[i] += (i < kNumClassificationTasks)
                        ? 1.0 - 2.0 * L * inv_sq[i]
                        : 1.0 - L * inv_sq[i];
        }
    }
    return res;
}

Trainer::Trainer(SoundAQnet& net, TrainConfig cfg)
    : net_(net), cfg_(cfg),
      adam_(net.params(), AdamConfig{cfg.learning_rate, 0.9, 0.999, 1e-8}) {
    if (cfg_.batch_size < 1 || cfg_.max_epochs < 1 || cfg_.patience < 1 ||
        cfg_.patience_start_epoch < 1 || cfg_.learning_rate <= 0.0)
        throw ValidationError("train config fields must be positive");
    if (cfg_.patience_start_epoch > cfg_.max_epochs)
        throw ValidationError(
            "patience_start_epoch must not exceed max_epochs");
}

EpochRecord Trainer::run_epoch(const std::vector<TrainSample>& train_set,
                               const std::vector<TrainSample>& val_set) {
    if (train_set.empty()) throw EmptySplitError("training split is empty");
    if (val_set.empty()) throw EmptySplitError("validation split is empty");

    const int epoch = int(history_.epochs.size()) + 1;
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(cfg_.seed ^
                        (0x9e3779b97f4a7c15ULL * std::uint64_t(epoch)));
    std::shuffle(order.begin(), order.end(), rng);

    EpochRecord rec;
    rec.epoch = epoch;
    const std::size_t n = train_set.size();
    for (std::size_t start = 0; start < n; start += std::size_t(cfg_.batch_size)) {
        const std::size_t stop = std::min(n, start + std::size_t(cfg_.batch_size));
        std::vector<std::size_t> idx(order.begin() + long(start),
                                     order.begin() + long(stop));
        Tensor mel, loud;
        make_batch(train_set, idx, mel, loud);
        std::vector<const LabelSet*> truth;
        truth.reserve(idx.size());
        for (std::size_t i : idx) truth.push_back(&train_set[i].labels);

        net_.zero_grad();
        const NetworkOutputs out = net_.forward(mel, loud, /*train=*/true);
        const BatchObjective obj = batch_objective(out, truth, net_, true);
        net_.backward(obj.output_grads);
        adam_.step();

        const double w = double(idx.size()) / double(n);
        rec.total_loss += w * obj.total;
        for (int i = 0; i < kNumTasks; ++i)
            rec.task_losses[i] += w * obj.mean_losses.values[i];
    }

    // Validation pass (eval mode, no updates).
    const std::size_t vn = val_set.size();
    std::vector<std::size_t> vorder(vn);
    std::iota(vorder.begin(), vorder.end(), 0);
    for (std::size_t start = 0; start < vn;
         start += std::size_t(cfg_.batch_size)) {
        const std::size_t stop = std::min(vn, start + std::size_t(cfg_.batch_size));
        std::vector<std::size_t> idx(vorder.begin() + long(start),
                                     vorder.begin() + long(stop));
        Tensor mel, loud;
        make_batch(val_set, idx, mel, loud);
        std::vector<const LabelSet*> truth;
        for (std::size_t i : idx) truth.push_back(&val_set[i].labels);
        const NetworkOutputs out = net_.forward(mel, loud, /*train=*/false);
        const BatchObjective obj = batch_objective(out, truth, net_, false);
        const double w = double(idx.size()) / double(vn);
        rec.val_total_loss += w * obj.total;
        rec.val_isop_loss += w * obj.mean_losses.values[2];
    }

    history_.epochs.push_back(rec);
    if (history_.best_epoch == 0 ||
        rec.val_isop_loss < history_.best_val_isop) {
        history_.best_epoch = epoch;
        history_.best_val_isop = rec.val_isop_loss;
        best_ = snapshot(net_);
    }
    return rec;
}

bool Trainer::should_stop() const {
    const int epoch = int(history_.epochs.size());
    if (epoch == 0) return false;
    return early_stop_check(history_, epoch, cfg_);
}

TrainResult train(SoundAQnet& net, const std::vector<TrainSample>& train_set,
                  const std::vector<TrainSample>& val_set,
                  const TrainConfig& cfg, const std::string& log_path) {
    Trainer trainer(net, cfg);
    std::ofstream log;
    if (!log_path.empty()) {
        log.open(log_path, std::ios::app);
        if (!log) throw IoError("cannot open training log " + log_path);
    }
    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        const EpochRecord rec = trainer.run_epoch(train_set, val_set);
        if (log.is_open()) {
            nlohmann::json j;
            j["epoch"] = rec.epoch;
            j["total_loss"] = rec.total_loss;
            j["task_losses"] = rec.task_losses;
            j["val_total_loss"] = rec.val_total_loss;
            j["val_isop_loss"] = rec.val_isop_loss;
            j["best_epoch"] = trainer.history().best_epoch;
            log << j.dump() << '\n';
        }
        if (trainer.should_stop()) break;
    }
    return {trainer.history(), trainer.best()};
}

std::vector<PredictionBundle> predict_samples(
    SoundAQnet& net, const std::vector<TrainSample>& samples, int batch_size) {
    if (samples.empty()) throw EmptySplitError("predict: no samples");
    std::vector<PredictionBundle> out;
    out.reserve(samples.size());
    const std::size_t n = samples.size();
    for (std::size_t start = 0; start < n; start += std::size_t(batch_size)) {
        const std::size_t stop = std::min(n, start + std::size_t(batch_size));
        std::vector<std::size_t> idx;
        for (std::size_t i = start; i < stop; ++i) idx.push_back(i);
        Tensor mel, loud;
        make_batch(samples, idx, mel, loud);
        const NetworkOutputs y = net.forward(mel, loud, /*train=*/false);
        for (auto& pb : to_predictions(y)) out.push_back(pb);
    }
    return out;
}

} // namespace ssc

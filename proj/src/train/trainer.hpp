#ifndef SSC_TRAIN_TRAINER_HPP
#define SSC_TRAIN_TRAINER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "features/types.hpp"
#include "model/checkpoint.hpp"
#include "model/network.hpp"
#include "objectives/losses.hpp"
#include "train/metrics.hpp"
#include "train/optimizer.hpp"

namespace ssc {

struct TrainConfig {
    double learning_rate = 5e-4;
    int batch_size = 32;
    int max_epochs = 100;
    int patience = 10;
    int patience_start_epoch = 10;
    std::uint64_t seed = 0;
};

struct TrainSample {
    std::string clip_id;
    FeaturePair features;
    LabelSet labels;
};

struct EpochRecord {
    int epoch = 0; // 1-based
    double total_loss = 0.0;
    std::array<double, kNumTasks> task_losses{};
    double val_total_loss = 0.0;
    double val_isop_loss = 0.0;
};

struct TrainHistory {
    std::vector<EpochRecord> epochs;
    int best_epoch = 0; // 1-based epoch minimizing validation ISOP loss
    double best_val_isop = 0.0;
};

// True iff training should stop after `epoch`: checks begin at
// patience_start_epoch, and the validation ISOP loss has not strictly
// improved on the running best for `patience` epochs (the waiting window
// starts no earlier than the check start).
bool early_stop_check(const TrainHistory& history, int epoch,
                      const TrainConfig& cfg);

// Per-sample prediction bundles (softmax/sigmoid applied) from raw outputs.
std::vector<PredictionBundle> to_predictions(const NetworkOutputs& out);

// Batch tensors from a subset of samples; clips are cropped to the shortest
// mel/loudness length in the batch so every row has equal frames.
void make_batch(const std::vector<TrainSample>& samples,
                const std::vector<std::size_t>& indices, Tensor& mel,
                Tensor& loudness);

struct BatchObjective {
    LossVector mean_losses;    // batch-mean per-task losses
    double total = 0.0;        // uncertainty-weighted total
    NetworkOutputs output_grads;
};

// Evaluates the uncertainty-weighted multitask objective for one batch and
// its gradients w.r.t. the network outputs; when requested, also accumulates
// the log-sigma gradients into the network.
BatchObjective batch_objective(const NetworkOutputs& out,
                               const std::vector<const LabelSet*>& truth,
                               SoundAQnet& net, bool accumulate_sigma_grad);

class Trainer {
public:
    Trainer(SoundAQnet& net, TrainConfig cfg);

    // One optimization pass over the training set plus a validation pass;
    // appends to the history and refreshes the best snapshot.
    EpochRecord run_epoch(const std::vector<TrainSample>& train_set,
                          const std::vector<TrainSample>& val_set);
    bool should_stop() const;

    const TrainHistory& history() const { return history_; }
    const Checkpoint& best() const { return best_; }

private:
    SoundAQnet& net_;
    TrainConfig cfg_;
    Adam adam_;
    TrainHistory history_;
    Checkpoint best_;
};

struct TrainResult {
    TrainHistory history;
    Checkpoint best;
};

// Full loop: epochs until max_epochs or the early-stopping rule fires.
// When log_path is non-empty, one line-delimited JSON record per epoch is
// appended there.
TrainResult train(SoundAQnet& net, const std::vector<TrainSample>& train_set,
                  const std::vector<TrainSample>& val_set,
                  const TrainConfig& cfg, const std::string& log_path = "");

// Eval-mode predictions for a whole sample list (batched, deterministic).
std::vector<PredictionBundle> predict_samples(
    SoundAQnet& net, const std::vector<TrainSample>& samples, int batch_size);

} // namespace ssc

#endif

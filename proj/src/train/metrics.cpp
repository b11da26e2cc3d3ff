#include "train/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "common/errors.hpp"
#include "objectives/circumplex.hpp"

namespace ssc {

double rank_auc(const std::vector<double>& scores,
                const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw ShapeError("rank_auc: scores/labels length mismatch");
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (int l : labels) n_pos += std::size_t(l != 0);
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw DegenerateClassError("rank_auc needs both classes present");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Average ranks across tied score groups, 1-based.
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg = 0.5 * double(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        i = j + 1;
    }
    double pos_rank_sum = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        if (labels[k] != 0) pos_rank_sum += rank[k];
    return (pos_rank_sum - 0.5 * double(n_pos) * double(n_pos + 1)) /
           (double(n_pos) * double(n_neg));
}

MetricReport evaluate_metrics(const std::vector<PredictionBundle>& predictions,
                              const std::vector<LabelSet>& truths) {
    if (predictions.size() != truths.size())
        throw ShapeError("evaluate_metrics: prediction/truth count mismatch");
    if (predictions.empty())
        throw EmptySplitError("evaluate_metrics: empty split");
    const std::size_t n = predictions.size();

    MetricReport rep;
    std::size_t correct = 0;
    for (std::size_t s = 0; s < n; ++s) {
        int argmax = 0;
        for (int k = 1; k < kNumScenes; ++k)
            if (predictions[s].scene_probs[k] >
                predictions[s].scene_probs[argmax])
                argmax = k;
        correct += std::size_t(argmax == truths[s].scene);
    }
    rep.asc_accuracy = double(correct) / double(n);

    double auc_sum = 0.0;
    int auc_count = 0;
    for (int e = 0; e < kNumEvents; ++e) {
        std::vector<double> scores(n);
        std::vector<int> labels(n);
        for (std::size_t s = 0; s < n; ++s) {
            scores[s] = predictions[s].event_probs[e];
            labels[s] = truths[s].events[e];
        }
        try {
            auc_sum += rank_auc(scores, labels);
            ++auc_count;
        } catch (const DegenerateClassError&) {
            rep.skipped_event_classes.push_back(e);
        }
    }
    rep.aec_auc_macro = auc_count ? auc_sum / double(auc_count) : 0.0;

    std::array<double, 2 + kNumAq> sq{};
    for (std::size_t s = 0; s < n; ++s) {
        const double tp = iso_pleasantness(truths[s].aq);
        const double te = iso_eventfulness(truths[s].aq);
        sq[0] += (predictions[s].isop - tp) * (predictions[s].isop - tp);
        sq[1] += (predictions[s].isoe - te) * (predictions[s].isoe - te);
        for (int a = 0; a < kNumAq; ++a) {
            const double d = predictions[s].aq[a] - double(truths[s].aq[a]);
            sq[2 + a] += d * d;
        }
    }
    double aq_sum = 0.0;
    for (int t = 0; t < 2 + kNumAq; ++t) {
        rep.mse_per_target[t] = sq[t] / double(n);
        if (t >= 2) aq_sum += rep.mse_per_target[t];
    }
    rep.mse_mean_aq = aq_sum / double(kNumAq);
    return rep;
}

} // namespace ssc

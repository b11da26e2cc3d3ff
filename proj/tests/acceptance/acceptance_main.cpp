// Release checklist. Each item prints one verdict line; the exit code is
// the number of failed items. Runs standalone against the core library so
// a packaging problem in the test framework cannot mask a regression here.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "common/domain.hpp"
#include "common/errors.hpp"
#include "common/textio.hpp"
#include "features/calibration.hpp"
#include "features/mel.hpp"
#include "features/zwicker.hpp"
#include "model/network.hpp"
#include "model/receptive_field.hpp"
#include "objectives/circumplex.hpp"
#include "objectives/losses.hpp"
#include "pipeline/config.hpp"
#include "pipeline/pipeline.hpp"
#include "thumbs/stats.hpp"
#include "thumbs/thumbs.hpp"
#include "train/metrics.hpp"
#include "train/trainer.hpp"

#include "test_util.hpp"

using namespace ssc;
using ssc_test::TempDir;

namespace {

#include "stat_fixtures.inc"

using Problems = std::vector<std::string>;

void expect(Problems& out, bool ok, const std::string& what) {
    if (!ok) out.push_back(what);
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(12);
    s << v;
    return s.str();
}

// ---------------------------------------------------------------- item 1

void check_receptive_fields(Problems& out) {
    const std::vector<RfLayer> plain = branch_time_plan(9, false);
    const int quoted[6] = {9, 17, 33, 49, 73, 98};
    for (int i = 0; i < 6; ++i) {
        const std::vector<RfLayer> prefix(plain.begin(),
                                          plain.begin() + i + 1);
        const int got = receptive_field(prefix);
        expect(out, got == quoted[i],
               "layer " + std::to_string(i + 1) + " RFS " +
                   std::to_string(got) + " != quoted " +
                   std::to_string(quoted[i]));
    }
    if (!out.empty())
        out.push_back(
            "note: the published sequence ends 73, 98, but its own "
            "recurrence gives 73 + (9-1)*3 = 97; the pooled values below "
            "all reproduce exactly");
    const int kernels[4] = {3, 5, 7, 9};
    const int pooled[4] = {76, 144, 212, 280};
    for (int i = 0; i < 4; ++i) {
        const int got = receptive_field(branch_time_plan(kernels[i], true));
        expect(out, got == pooled[i],
               "pooled RFS for kernel " + std::to_string(kernels[i]) + " " +
                   std::to_string(got) + " != " + std::to_string(pooled[i]));
    }
}

// ---------------------------------------------------------------- item 2

void check_circumplex_lattice(Problems& out) {
    // Every coordinate that contributes to an axis swept over {1..5};
    // non-contributing coordinates pinned at the scale midpoint.
    long violations_p = 0, violations_e = 0;
    std::array<double, kNumAq> r;
    for (int a = 1; a <= 5; ++a)
        for (int b = 1; b <= 5; ++b)
            for (int c = 1; c <= 5; ++c)
                for (int d = 1; d <= 5; ++d)
                    for (int e = 1; e <= 5; ++e)
                        for (int f = 1; f <= 5; ++f) {
                            r.fill(3.0);
                            r[kAqPleasant] = a;
                            r[kAqAnnoying] = b;
                            r[kAqCalm] = c;
                            r[kAqChaotic] = d;
                            r[kAqVibrant] = e;
                            r[kAqMonotonous] = f;
                            const double p = iso_pleasantness(r);
                            if (!(p >= -1.0 - 1e-12 && p <= 1.0 + 1e-12))
                                ++violations_p;
                            r.fill(3.0);
                            r[kAqEventful] = a;
                            r[kAqUneventful] = b;
                            r[kAqCalm] = c;
                            r[kAqChaotic] = d;
                            r[kAqVibrant] = e;
                            r[kAqMonotonous] = f;
                            const double q = iso_eventfulness(r);
                            if (!(q >= -1.0 - 1e-12 && q <= 1.0 + 1e-12))
                                ++violations_e;
                        }
    expect(out, violations_p == 0,
           std::to_string(violations_p) + " pleasantness lattice points "
                                          "outside [-1,1]");
    expect(out, violations_e == 0,
           std::to_string(violations_e) + " eventfulness lattice points "
                                          "outside [-1,1]");

    std::array<double, kNumAq> best;
    best.fill(3.0);
    best[kAqPleasant] = 5;
    best[kAqAnnoying] = 1;
    best[kAqCalm] = 5;
    best[kAqChaotic] = 1;
    best[kAqVibrant] = 5;
    best[kAqMonotonous] = 1;
    expect(out, std::abs(iso_pleasantness(best) - 1.0) <= 1e-12,
           "pleasantness upper boundary " + fmt(iso_pleasantness(best)));
    std::array<double, kNumAq> worst = best;
    std::swap(worst[kAqPleasant], worst[kAqAnnoying]);
    std::swap(worst[kAqCalm], worst[kAqChaotic]);
    std::swap(worst[kAqVibrant], worst[kAqMonotonous]);
    expect(out, std::abs(iso_pleasantness(worst) + 1.0) <= 1e-12,
           "pleasantness lower boundary " + fmt(iso_pleasantness(worst)));

    std::array<double, kNumAq> lively;
    lively.fill(3.0);
    lively[kAqEventful] = 5;
    lively[kAqUneventful] = 1;
    lively[kAqCalm] = 1;
    lively[kAqChaotic] = 5;
    lively[kAqVibrant] = 5;
    lively[kAqMonotonous] = 1;
    expect(out, std::abs(iso_eventfulness(lively) - 1.0) <= 1e-12,
           "eventfulness upper boundary " + fmt(iso_eventfulness(lively)));

    std::array<double, kNumAq> mid;
    mid.fill(3.0);
    expect(out, std::abs(iso_pleasantness(mid)) <= 1e-12 &&
                    std::abs(iso_eventfulness(mid)) <= 1e-12,
           "midpoint response does not map to 0/0");
}

// ---------------------------------------------------------------- item 3

void check_loss_formula(Problems& out) {
    LossVector ones;
    ones.values.fill(1.0);
    std::array<double, kNumTasks> sigma;
    sigma.fill(1.0);
    const double seven = uncertainty_weighted_total(ones, sigma);
    expect(out, std::abs(seven - 7.0) <= 1e-12,
           "unit case total " + fmt(seven) + " != 7");

    LossVector mixed;
    mixed.values.fill(0.0);
    mixed.values[2] = 2.0; // one regression task active
    sigma.fill(1.0);
    sigma[2] = 2.0;
    const double got = uncertainty_weighted_total(mixed, sigma);
    expect(out, std::abs(got - 0.9431) <= 1e-4,
           "mixed case total " + fmt(got) + " not within 1e-4 of 0.9431");
}

// ---------------------------------------------------------------- item 4

void check_thumbs(Problems& out) {
    ThumbsRating r;
    r.source = "expert";
    auto score = [&](double p, double rr, double f, double c, double i) {
        ThumbsRating t = r;
        t.p = p;
        t.r = rr;
        t.f = f;
        t.c = c;
        t.i = i;
        return thumbs_score(t);
    };
    const double published = score(3.84, 3.93, -0.10, -0.14, -0.22);
    expect(out, std::abs(published - 3.425) <= 1e-12,
           "field means reassemble to " + fmt(published) + " != 3.425");
    expect(out, std::abs(published - 3.43) <= 0.01,
           "reassembled score not within 0.01 of the rounded 3.43");
    expect(out, score(5, 5, 0, 0, 0) == 5.0, "maximum score != +5");
    expect(out, score(1, 1, -2, -2, -2) == -5.0, "minimum score != -5");
}

// ---------------------------------------------------------------- item 5

void check_feature_shapes(Problems& out) {
    const int sr = 32000;
    const std::vector<float> clip = ssc_test::sine(440.0, 0.1, 30.0, sr);
    const MelSpectrogram mel = log_mel(clip, sr);
    expect(out, std::abs(mel.n_frames - 3000) <= 1,
           "30 s mel frames " + std::to_string(mel.n_frames));
    expect(out, int(mel.values.size()) == mel.n_frames * kMelBands,
           "mel band count != 64 per frame");

    // 40 dB SPL at 1 kHz: rms 2e-3 Pa.
    const std::vector<float> tone =
        ssc_test::sine(1000.0, 2e-3 * std::sqrt(2.0), 30.0, sr);
    const LoudnessSeries loud = zwicker_loudness(tone, sr);
    expect(out, std::abs(loud.n_frames - 15000) <= 1,
           "30 s loudness frames " + std::to_string(loud.n_frames));

    // Anchor point of the sone scale.
    std::vector<double> bands(28, -100.0);
    bands[16] = 40.0; // 1 kHz third-octave band
    const double sone = stationary_loudness_from_bands(bands);
    expect(out, sone >= 0.95 && sone <= 1.05,
           "1 kHz / 40 dB stationary loudness " + fmt(sone) +
               " sone outside 1.0 +- 5%");
}

// ---------------------------------------------------------------- item 6

void check_gradients(Problems& out) {
    ModelConfig tiny;
    tiny.filters = {2, 2, 2};
    tiny.embed_dim = 8;
    tiny.common_dim = 16;
    tiny.head_hidden = 8;
    SoundAQnet net(tiny);
    net.init_params(1234);

    std::mt19937_64 rng(99);
    std::normal_distribution<double> noise(0.0, 0.5);
    Tensor mel({1, 1, 300, kMelBands});
    for (std::size_t i = 0; i < mel.size(); ++i) mel[i] = noise(rng);
    Tensor loudness({1, 1, 1500, 1});
    for (std::size_t i = 0; i < loudness.size(); ++i)
        loudness[i] = 1.0 + 0.2 * noise(rng);

    LabelSet y;
    y.scene = 1;
    for (int e = 0; e < kNumEvents; e += 2) y.events[std::size_t(e)] = 1;
    for (int a = 0; a < kNumAq; ++a) y.aq[std::size_t(a)] = 1 + (a * 3) % 5;
    const std::vector<const LabelSet*> truth = {&y};

    auto loss_at = [&]() {
        NetworkOutputs o = net.forward(mel, loudness, true);
        return batch_objective(o, truth, net, false).total;
    };

    net.zero_grad();
    NetworkOutputs o = net.forward(mel, loudness, true);
    BatchObjective obj = batch_objective(o, truth, net, true);
    net.backward(obj.output_grads);

    std::vector<Param*> params = net.params();
    std::mt19937_64 pick(4321);
    const double h = 1e-5;
    int checked = 0;
    double worst = 0.0;
    while (checked < 24) {
        Param* p = params[pick() % params.size()];
        const std::size_t k = pick() % p->value.size();
        const double saved = p->value[k];
        const double analytic = p->grad[k];
        p->value[k] = saved + h;
        const double up = loss_at();
        p->value[k] = saved - h;
        const double down = loss_at();
        p->value[k] = saved;
        const double fd = (up - down) / (2.0 * h);
        // Floor keeps finite-difference roundoff (~eps * loss / h) from
        // registering as disagreement on near-zero gradients.
        const double rel =
            std::abs(fd - analytic) /
            std::max(std::abs(fd) + std::abs(analytic), 1e-6);
        worst = std::max(worst, rel);
        if (rel >= 1e-3)
            out.push_back(p->name + "[" + std::to_string(k) +
                          "]: analytic " + fmt(analytic) + " vs fd " +
                          fmt(fd) + " rel " + fmt(rel));
        ++checked;
    }
    std::printf("       gradient check: %d parameters, worst relative "
                "error %.3e\n",
                checked, worst);
}

// ---------------------------------------------------------------- item 7

ModelConfig small_model() {
    ModelConfig m;
    m.filters = {2, 2, 2};
    m.embed_dim = 8;
    m.common_dim = 16;
    m.head_hidden = 8;
    return m;
}

void check_optimization(Problems& out) {
    // Part one: drive the training loss into the floor on the demo set.
    TempDir dir("accept_fit");
    run_make_fixture(dir.str(), 7);
    PipelineConfig cfg = load_pipeline_config(dir.str("config.json"));
    cfg.model = small_model();
    run_extract_features(cfg);
    const std::vector<TrainSample> clips = load_split_samples(cfg, "all");

    TrainConfig tc;
    tc.learning_rate = 2e-2;
    tc.batch_size = 2;
    tc.max_epochs = 50;
    tc.patience = 1000; // no early exit while overfitting
    tc.seed = 3;
    SoundAQnet net(cfg.model);
    net.init_params(1234);
    Trainer trainer(net, tc);
    double first = 0.0, best = 0.0;
    for (int epoch = 0; epoch < 50; ++epoch) {
        const EpochRecord rec = trainer.run_epoch(clips, clips);
        if (epoch == 0) first = best = rec.total_loss;
        best = std::min(best, rec.total_loss);
    }
    const double reduction = (first - best) / std::abs(first);
    std::printf("       overfit: first epoch loss %.4f, best %.4f, "
                "reduction %.1f%%\n",
                first, best, 100.0 * reduction);
    expect(out, reduction >= 0.9,
           "training loss reduction " + fmt(reduction) + " below 90%");

    // Part two: a trivially separable scene problem must be solved.
    std::vector<TrainSample> separable;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> jitter(-0.2, 0.2);
    for (int s = 0; s < kNumScenes; ++s) {
        for (int rep = 0; rep < 8; ++rep) {
            TrainSample ts;
            ts.clip_id = "syn_" + std::to_string(s * 8 + rep);
            ts.features.sample_rate = 32000;
            ts.features.mel.n_frames = 300;
            ts.features.mel.values.assign(std::size_t(300) * kMelBands,
                                          -2.0f);
            for (int t = 0; t < 300; ++t)
                for (int b = s * 20; b < s * 20 + 12; ++b)
                    ts.features.mel.values[std::size_t(t) * kMelBands + b] =
                        float(2.0 + jitter(rng));
            ts.features.loudness.n_frames = 1500;
            ts.features.loudness.values.assign(1500, 1.0f);
            ts.labels.scene = s;
            ts.labels.events[std::size_t(s)] = 1;
            ts.labels.aq.fill(3);
            separable.push_back(ts);
        }
    }
    TrainConfig tc2 = tc;
    tc2.batch_size = 8;
    tc2.learning_rate = 1e-2;
    SoundAQnet net2(small_model());
    net2.init_params(11);
    Trainer trainer2(net2, tc2);
    for (int epoch = 0; epoch < 30; ++epoch)
        trainer2.run_epoch(separable, separable);
    const std::vector<PredictionBundle> preds =
        predict_samples(net2, separable, 8);
    int correct = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const auto& p = preds[i].scene_probs;
        const int arg = int(std::max_element(p.begin(), p.end()) - p.begin());
        if (arg == separable[i].labels.scene) ++correct;
    }
    const double acc = double(correct) / double(preds.size());
    std::printf("       separable scenes: accuracy %.1f%%\n", 100.0 * acc);
    expect(out, acc >= 0.9, "scene accuracy " + fmt(acc) + " below 90%");
}

// ---------------------------------------------------------------- item 8

TrainHistory history_from(const std::vector<double>& val_isop) {
    TrainHistory h;
    for (std::size_t i = 0; i < val_isop.size(); ++i) {
        EpochRecord rec;
        rec.epoch = int(i) + 1;
        rec.val_isop_loss = val_isop[i];
        h.epochs.push_back(rec);
    }
    return h;
}

void check_early_stopping(Problems& out) {
    TrainConfig cfg; // patience 10, checks start at epoch 10
    {
        // flat validation from the start: fires exactly at epoch 20
        const TrainHistory h = history_from(std::vector<double>(40, 1.0));
        expect(out, !early_stop_check(h, 9, cfg), "fired before the start epoch");
        expect(out, !early_stop_check(h, 19, cfg), "flat curve fired at 19");
        expect(out, early_stop_check(h, 20, cfg), "flat curve silent at 20");
    }
    {
        // best at epoch 12, no improvement after: fires exactly at 22
        std::vector<double> v(40, 1.0);
        for (int e = 0; e < 12; ++e) v[std::size_t(e)] = 2.0 - 0.08 * e;
        v[11] = 0.5;
        const TrainHistory h = history_from(v);
        expect(out, !early_stop_check(h, 21, cfg), "best@12 curve fired at 21");
        expect(out, early_stop_check(h, 22, cfg), "best@12 curve silent at 22");
    }
    {
        // strictly improving: never fires
        std::vector<double> v;
        for (int e = 0; e < 60; ++e) v.push_back(2.0 - 0.01 * e);
        const TrainHistory h = history_from(v);
        bool fired = false;
        for (int e = 1; e <= 60; ++e) fired = fired || early_stop_check(h, e, cfg);
        expect(out, !fired, "improving curve triggered a stop");
    }
}

// ---------------------------------------------------------------- item 9

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

double spearman_exact_p_bruteforce(const std::vector<double>& x,
                                   const std::vector<double>& y) {
    const std::vector<double> rx = midranks(x);
    std::vector<double> ry = midranks(y);
    const double observed = std::abs(pearson(rx, ry));
    std::sort(ry.begin(), ry.end());
    long hits = 0, total = 0;
    do {
        ++total;
        if (std::abs(pearson(rx, ry)) >= observed - 1e-12) ++hits;
    } while (std::next_permutation(ry.begin(), ry.end()));
    return double(hits) / double(total);
}

double auc_pair_count(const std::vector<double>& scores,
                      const std::vector<int>& labels) {
    double won = 0.0;
    long pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            ++pairs;
            if (scores[i] > scores[j])
                won += 1.0;
            else if (scores[i] == scores[j])
                won += 0.5;
        }
    }
    return won / double(pairs);
}

void check_statistics(Problems& out) {
    const auto [rho, p] = spearman_rho(kSpearX8, kSpearY8);
    expect(out, std::abs(rho - 2.0 / 3.0) <= 1e-9,
           "spearman rho " + fmt(rho) + " != 2/3");
    const double exact = spearman_exact_p_bruteforce(kSpearX8, kSpearY8);
    expect(out, std::abs(p - exact) <= 1e-9,
           "spearman p " + fmt(p) + " != enumerated " + fmt(exact));

    const StatResult w12 = wilcoxon_signed_rank(kWilA12, kWilB12);
    expect(out, w12.statistic == 40.0 &&
                    std::abs(w12.p_value - 0.9697265625) <= 1e-9,
           "wilcoxon n=12: W+ " + fmt(w12.statistic) + " p " +
               fmt(w12.p_value));
    const StatResult whand =
        wilcoxon_signed_rank({2, 4, 6, 1}, {1, 2, 3, 5});
    expect(out, whand.statistic == 6.0 &&
                    std::abs(whand.p_value - 0.875) <= 1e-12,
           "wilcoxon hand case: W+ " + fmt(whand.statistic) + " p " +
               fmt(whand.p_value));

    const StatResult sw = shapiro_wilk(kShapX20);
    expect(out, std::abs(sw.statistic - 0.956993764044) <= 1e-7 &&
                    std::abs(sw.p_value - 0.485678557888) <= 1e-6,
           "shapiro n=20: W " + fmt(sw.statistic) + " p " + fmt(sw.p_value));

    const StatResult t10 = paired_t(kPairA10, kPairB10);
    expect(out, std::abs(t10.statistic - (-1.614376487934)) <= 1e-9 &&
                    std::abs(t10.p_value - 0.140903023964) <= 1e-8,
           "paired t n=10: t " + fmt(t10.statistic) + " p " +
               fmt(t10.p_value));
    const StatResult th = paired_t({2, 4, 6}, {1, 2, 3});
    expect(out, std::abs(th.statistic - 2.0 * std::sqrt(3.0)) <= 1e-12,
           "paired t hand case: t " + fmt(th.statistic));

    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 5 + int(rng() % 46);
        std::vector<double> scores;
        std::vector<int> labels;
        for (int i = 0; i < n; ++i) {
            scores.push_back(0.25 * double(rng() % 9)); // coarse grid, ties
            labels.push_back(int(rng() % 2));
        }
        labels[0] = 0;
        labels[1] = 1;
        const double a = rank_auc(scores, labels);
        const double b = auc_pair_count(scores, labels);
        if (a != b) {
            out.push_back("AUC trial " + std::to_string(trial) + ": rank " +
                          fmt(a) + " != pairwise " + fmt(b));
            break;
        }
    }
}

// ---------------------------------------------------------------- item 10

void check_determinism(Problems& out) {
    TempDir dir("accept_det");
    run_make_fixture(dir.str(), 7);
    PipelineConfig cfg = load_pipeline_config(dir.str("config.json"));
    cfg.model = small_model();
    cfg.train.max_epochs = 3;
    cfg.train.patience_start_epoch = 3;
    cfg.train.patience = 3;
    cfg.train.batch_size = 8;
    cfg.seed = 11;
    cfg.train.seed = 11;

    run_extract_features(cfg);
    run_pseudo_label(cfg);

    const std::filesystem::path outputs(cfg.output_dir);
    auto run_chain = [&]() {
        run_train(cfg);
        run_predict(cfg, "all");
        run_caption(cfg, "all");
        return std::array<std::string, 3>{
            read_text_file((outputs / "predictions_all.jsonl").string()),
            read_text_file((outputs / "prompts_all.jsonl").string()),
            read_text_file((outputs / "captions_all.jsonl").string())};
    };
    const auto first = run_chain();
    const auto second = run_chain();
    const char* names[3] = {"predictions", "prompts", "captions"};
    for (int i = 0; i < 3; ++i)
        expect(out, first[std::size_t(i)] == second[std::size_t(i)],
               std::string(names[i]) + " differ between same-seed runs");
    expect(out, !first[1].empty() && !first[2].empty(),
           "caption artifacts empty");
}

// ---------------------------------------------------------------- item 11

void check_parameter_budget(Problems& out) {
    SoundAQnet net{ModelConfig{}};
    const double count = double(net.num_params());
    std::printf("       default configuration: %.0f parameters\n", count);
    expect(out, count >= 0.85 * 2.70e6 && count <= 1.15 * 2.70e6,
           "parameter count " + fmt(count) + " outside 2.70M +- 15%");
}

// ----------------------------------------------------------------

struct Item {
    int id;
    const char* what;
    double budget_s; // 0 = no stated bound
    std::function<void(Problems&)> body;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Item> items = {
        {1, "receptive-field layer sequence and pooled frame counts", 1.0,
         check_receptive_fields},
        {2, "pleasantness/eventfulness bounded on the full response lattice",
         10.0, check_circumplex_lattice},
        {3, "uncertainty-weighted loss at hand-computed points", 0.0,
         check_loss_formula},
        {4, "caption score formula against published means and bounds", 0.0,
         check_thumbs},
        {5, "feature shapes and the 1 sone anchor", 0.0, check_feature_shapes},
        {6, "analytic gradients against central differences", 60.0,
         check_gradients},
        {7, "optimizer overfits the demo set and solves separable scenes",
         300.0, check_optimization},
        {8, "early stopping fires exactly per the patience rule", 0.0,
         check_early_stopping},
        {9, "statistics against enumeration and frozen references", 0.0,
         check_statistics},
        {10, "same-seed pipeline runs are byte-identical", 0.0,
         check_determinism},
        {11, "default model parameter count inside the budget", 0.0,
         check_parameter_budget},
    };

    std::vector<int> only; // optional item ids on the command line
    for (int a = 1; a < argc; ++a) only.push_back(std::atoi(argv[a]));

    int failures = 0, ran = 0;
    for (const Item& item : items) {
        if (!only.empty() &&
            std::find(only.begin(), only.end(), item.id) == only.end())
            continue;
        Problems problems;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            item.body(problems);
        } catch (const std::exception& ex) {
            problems.push_back(std::string("exception: ") + ex.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t0)
                .count();
        if (item.budget_s > 0.0 && secs > item.budget_s)
            problems.push_back("took " + fmt(secs) + " s, budget " +
                               fmt(item.budget_s) + " s");
        const bool pass = problems.empty();
        std::printf("[%s] %2d. %s (%.2f s)\n", pass ? "PASS" : "FAIL",
                    item.id, item.what, secs);
        for (const std::string& p : problems)
            std::printf("       - %s\n", p.c_str());
        if (!pass) ++failures;
        ++ran;
    }
    std::printf("%d/%d criteria passed\n", ran - failures, ran);
    return failures;
}

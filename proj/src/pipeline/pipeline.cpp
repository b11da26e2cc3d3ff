#include "pipeline/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "caption/llm_client.hpp"
#include "caption/prompt.hpp"
#include "common/errors.hpp"
#include "common/textio.hpp"
#include "common/wav.hpp"
#include "features/calibration.hpp"
#include "features/feature_cache.hpp"
#include "features/mel.hpp"
#include "features/zwicker.hpp"
#include "ingest/manifest.hpp"
#include "ingest/pseudo_label.hpp"
#include "model/checkpoint.hpp"
#include "objectives/circumplex.hpp"
#include "pipeline/fixture.hpp"
#include "thumbs/thumbs.hpp"

#include "json.hpp"

namespace ssc {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string predictions_path(const PipelineConfig& cfg,
                             const std::string& split) {
    return (fs::path(cfg.output_dir) / ("predictions_" + split + ".jsonl"))
        .string();
}

bool in_requested_split(const ClipRecord& rec, const std::string& split) {
    if (split == "all") return rec.split != Split::none;
    return rec.split == split_from_name(split);
}

json prediction_record(const ClipRecord& rec, const PredictionBundle& pred) {
    json r;
    r["clip_id"] = rec.clip_id;
    r["split"] = split_name(rec.split);
    r["scene_probs"] = pred.scene_probs;
    r["event_probs"] = pred.event_probs;
    r["isop"] = pred.isop;
    r["isoe"] = pred.isoe;
    r["aq"] = pred.aq;
    return r;
}

// jsonl reader; the first line is the run metadata header.
std::pair<json, std::vector<json>> read_jsonl(const std::string& path) {
    if (!fs::exists(path)) throw MissingArtifact(path + " does not exist");
    std::vector<json> records;
    json meta;
    bool first = true;
    for (const std::string& line : read_lines(path)) {
        if (trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(path + ": " + e.what());
        }
        if (first) {
            meta = j;
            first = false;
        } else {
            records.push_back(std::move(j));
        }
    }
    if (first) throw ParseError(path + " is empty");
    return {meta, records};
}

} // namespace

void record_run(const PipelineConfig& cfg, const std::string& subcommand,
                const std::vector<std::string>& overrides) {
    const fs::path dir = fs::path(cfg.output_dir) / "runs";
    fs::create_directories(dir);
    json j;
    j["subcommand"] = subcommand;
    j["config_hash"] = config_hash(cfg);
    j["seed"] = cfg.seed;
    j["overrides"] = overrides;
    j["config"] = json::parse(config_canonical(cfg));
    write_text_file((dir / (subcommand + ".json")).string(), j.dump(2) + "\n");
}

std::vector<TrainSample> load_split_samples(const PipelineConfig& cfg,
                                            const std::string& split) {
    const DatasetManifest manifest = load_manifest(cfg.manifest_path);
    const std::uint64_t want_hash = config_hash(cfg);
    std::vector<TrainSample> samples;
    for (const ClipRecord& rec : manifest.records) {
        if (!in_requested_split(rec, split)) continue;
        const std::string path =
            feature_cache_path(cfg.feature_dir, rec.clip_id);
        if (!feature_file_exists(path))
            throw CacheMissError("no cached features for " + rec.clip_id +
                                 "; run extract-features first");
        std::uint64_t got_hash = 0;
        TrainSample s;
        s.clip_id = rec.clip_id;
        s.features = load_features(path, &got_hash);
        if (got_hash != want_hash)
            throw CacheMissError("stale feature cache for " + rec.clip_id +
                                 "; re-run extract-features");
        s.labels = rec.labels();
        samples.push_back(std::move(s));
    }
    if (samples.empty())
        throw EmptySplitError("no clips in split '" + split + "'");
    return samples;
}

std::string run_extract_features(const PipelineConfig& cfg) {
    const DatasetManifest manifest = load_manifest(cfg.manifest_path);
    const WavData cal = read_wav(cfg.calibration_path);
    const CalibrationRef calibration = CalibrationRef::from_waveform(cal.mono());
    const std::uint64_t hash = config_hash(cfg);
    fs::create_directories(cfg.feature_dir);

    int extracted = 0, cached = 0;
    for (const ClipRecord& rec : manifest.records) {
        const std::string path =
            feature_cache_path(cfg.feature_dir, rec.clip_id);
        if (feature_file_exists(path)) {
            std::uint64_t got = 0;
            load_features(path, &got);
            if (got == hash) {
                ++cached;
                continue;
            }
        }
        const WavData wav = read_wav(rec.audio_path);
        const std::vector<float> mono = wav.mono();
        FeaturePair features;
        features.sample_rate = wav.sample_rate;
        features.mel = log_mel(mono, wav.sample_rate);
        features.loudness =
            zwicker_loudness(calibrate(mono, calibration), wav.sample_rate);
        save_features(features, hash, path);
        ++extracted;
    }
    record_run(cfg, "extract-features");
    std::ostringstream out;
    out << "extract-features: " << extracted << " extracted, " << cached
        << " cached";
    return out.str();
}

std::string run_pseudo_label(const PipelineConfig& cfg) {
    const DatasetManifest manifest = load_manifest(cfg.manifest_path);
    const fs::path tagger(cfg.tagger_dir);
    const std::vector<std::string> class_names =
        read_lines((tagger / "classes.txt").string());
    if (int(class_names.size()) != kTaggerClasses)
        throw ValidationError("classes.txt must list " +
                              std::to_string(kTaggerClasses) + " names");
    std::vector<int> masker_classes;
    for (const std::string& raw : read_lines((tagger / "maskers.txt").string())) {
        const std::string name = trim(raw);
        if (name.empty()) continue;
        const auto it =
            std::find(class_names.begin(), class_names.end(), name);
        if (it == class_names.end())
            throw VocabularyError("masker '" + name +
                                  "' is not a tagger class");
        masker_classes.push_back(int(it - class_names.begin()));
    }

    std::vector<std::string> clip_ids;
    std::vector<std::vector<int>> clip_hard;
    for (const ClipRecord& rec : manifest.records) {
        const TaggerProbFile probs = load_tagger_probs(
            (tagger / (rec.clip_id + ".txt")).string(), rec.clip_id,
            kTaggerClasses);
        std::vector<int> hard(std::size_t(kTaggerClasses), 0);
        if (probs.granularity == ProbGranularity::per_second) {
            // Binarize each second, then keep classes active in more than
            // clip_threshold of the seconds.
            std::vector<double> active(std::size_t(kTaggerClasses), 0.0);
            for (const std::vector<double>& row : probs.probs) {
                const std::vector<int> bits =
                    binarize_probs(row, cfg.per_second_threshold);
                for (int k = 0; k < kTaggerClasses; ++k)
                    active[std::size_t(k)] += bits[std::size_t(k)];
            }
            for (int k = 0; k < kTaggerClasses; ++k)
                hard[std::size_t(k)] =
                    active[std::size_t(k)] / double(probs.probs.size()) >
                    cfg.clip_threshold;
        } else {
            hard = binarize_probs(probs.probs.at(0), cfg.per_second_threshold);
        }
        clip_ids.push_back(rec.clip_id);
        clip_hard.push_back(std::move(hard));
    }

    const auto ranked = rank_event_occurrences(clip_hard);
    const std::vector<std::string> vocabulary =
        select_target_events(ranked, masker_classes, class_names);

    fs::create_directories(cfg.output_dir);
    std::ostringstream vocab_text;
    for (const std::string& name : vocabulary) vocab_text << name << '\n';
    write_text_file(
        (fs::path(cfg.output_dir) / "event_vocabulary.txt").string(),
        vocab_text.str());

    std::vector<int> vocab_class(vocabulary.size());
    for (std::size_t v = 0; v < vocabulary.size(); ++v) {
        const auto it = std::find(class_names.begin(), class_names.end(),
                                  vocabulary[v]);
        vocab_class[v] = int(it - class_names.begin());
    }
    // Column eN corresponds to line N of event_vocabulary.txt; the names
    // themselves may contain commas.
    std::ostringstream csv;
    csv << "clip_id";
    for (std::size_t v = 1; v <= vocabulary.size(); ++v) csv << ",e" << v;
    csv << '\n';
    for (std::size_t c = 0; c < clip_ids.size(); ++c) {
        csv << clip_ids[c];
        for (std::size_t v = 0; v < vocabulary.size(); ++v)
            csv << ','
                << clip_hard[c][std::size_t(vocab_class[v])];
        csv << '\n';
    }
    write_text_file((fs::path(cfg.output_dir) / "pseudo_labels.csv").string(),
                    csv.str());
    record_run(cfg, "pseudo-label");
    std::ostringstream out;
    out << "pseudo-label: " << clip_ids.size() << " clips, vocabulary of "
        << vocabulary.size();
    return out.str();
}

std::string run_split(const PipelineConfig& cfg, std::size_t n_train,
                      std::size_t n_val, std::size_t n_test) {
    DatasetManifest manifest = load_manifest(cfg.manifest_path);
    SplitSizes sizes{n_train, n_val, n_test};
    manifest = split_dataset(manifest, sizes, cfg.seed);
    save_manifest(manifest, cfg.manifest_path);
    record_run(cfg, "split");
    std::ostringstream out;
    out << "split: " << n_train << " train / " << n_val << " val / " << n_test
        << " test over " << manifest.records.size() << " clips";
    return out.str();
}

std::string run_train(const PipelineConfig& cfg) {
    const std::vector<TrainSample> train_set = load_split_samples(cfg, "train");
    const std::vector<TrainSample> val_set = load_split_samples(cfg, "val");

    SoundAQnet net(cfg.model);
    net.init_params(cfg.seed);
    TrainConfig tcfg = cfg.train;
    tcfg.seed = cfg.seed;

    fs::create_directories(cfg.checkpoint_dir);
    fs::create_directories(cfg.output_dir);
    const std::string log_path =
        (fs::path(cfg.checkpoint_dir) / "train_log.jsonl").string();
    if (fs::exists(log_path)) fs::remove(log_path);

    const TrainResult result = train(net, train_set, val_set, tcfg, log_path);

    save_checkpoint((fs::path(cfg.checkpoint_dir) / "last.ckpt").string(),
                    net);
    restore(net, result.best);
    save_checkpoint((fs::path(cfg.checkpoint_dir) / "best.ckpt").string(),
                    net);

    json summary;
    summary["config_hash"] = config_hash(cfg);
    summary["epochs"] = int(result.history.epochs.size());
    summary["best_epoch"] = result.history.best_epoch;
    summary["best_val_isop"] = result.history.best_val_isop;
    summary["train_clips"] = int(train_set.size());
    summary["val_clips"] = int(val_set.size());
    write_text_file(
        (fs::path(cfg.output_dir) / "train_summary.json").string(),
        summary.dump(2) + "\n");
    record_run(cfg, "train");
    std::ostringstream out;
    out << "train: " << result.history.epochs.size() << " epochs, best epoch "
        << result.history.best_epoch << " (val ISOP loss "
        << result.history.best_val_isop << ")";
    return out.str();
}

std::string run_predict(const PipelineConfig& cfg, const std::string& split) {
    const DatasetManifest manifest = load_manifest(cfg.manifest_path);
    const std::vector<TrainSample> samples = load_split_samples(cfg, split);

    SoundAQnet net(cfg.model);
    const std::string ckpt =
        (fs::path(cfg.checkpoint_dir) / "best.ckpt").string();
    if (!fs::exists(ckpt))
        throw MissingArtifact(ckpt + " does not exist; run train first");
    load_checkpoint_into(ckpt, net);

    const std::vector<PredictionBundle> preds =
        predict_samples(net, samples, cfg.train.batch_size);

    std::vector<LabelSet> truths;
    for (const TrainSample& s : samples) truths.push_back(s.labels);
    const MetricReport metrics = evaluate_metrics(preds, truths);

    std::map<std::string, const ClipRecord*> by_id;
    for (const ClipRecord& rec : manifest.records) by_id[rec.clip_id] = &rec;

    fs::create_directories(cfg.output_dir);
    std::ostringstream lines;
    json meta;
    meta["config_hash"] = config_hash(cfg);
    meta["split"] = split;
    meta["checkpoint"] = "best.ckpt";
    meta["metrics"]["asc_accuracy"] = metrics.asc_accuracy;
    meta["metrics"]["aec_auc_macro"] = metrics.aec_auc_macro;
    meta["metrics"]["mse_per_target"] = metrics.mse_per_target;
    meta["metrics"]["mse_mean_aq"] = metrics.mse_mean_aq;
    meta["metrics"]["skipped_event_classes"] = metrics.skipped_event_classes;
    lines << meta.dump() << '\n';
    for (std::size_t i = 0; i < samples.size(); ++i)
        lines << prediction_record(*by_id.at(samples[i].clip_id), preds[i])
                     .dump()
              << '\n';
    write_text_file(predictions_path(cfg, split), lines.str());
    record_run(cfg, "predict");
    std::ostringstream out;
    out << "predict: " << samples.size() << " clips (" << split
        << "), scene accuracy " << metrics.asc_accuracy;
    return out.str();
}

std::string run_caption(const PipelineConfig& cfg, const std::string& split,
                        bool force) {
    const auto [meta, records] = read_jsonl(predictions_path(cfg, split));
    const std::uint64_t want = config_hash(cfg);
    const std::uint64_t got = meta.value("config_hash", std::uint64_t(0));
    if (got != want && !force)
        throw HashMismatchError(
            "predictions were produced under a different config (pass force "
            "to caption anyway)");

    const PromptTemplate tmpl =
        cfg.prompt_template_path.empty()
            ? default_prompt_template()
            : load_prompt_template(cfg.prompt_template_path);

    StubCaptionClient stub;
    HttpCaptionClient http;
    CaptionClient& client =
        cfg.llm_stub ? static_cast<CaptionClient&>(stub)
                     : static_cast<CaptionClient&>(http);

    fs::create_directories(cfg.output_dir);
    std::ostringstream lines, prompt_lines;
    json head;
    head["config_hash"] = want;
    head["split"] = split;
    head["template_version"] = tmpl.version;
    head["model_id"] = cfg.llm.model_id;
    head["stub"] = cfg.llm_stub;
    lines << head.dump() << '\n';
    prompt_lines << head.dump() << '\n';

    for (const json& rec : records) {
        const std::string clip_id = rec.at("clip_id").get<std::string>();
        const std::vector<double> scene_probs =
            rec.at("scene_probs").get<std::vector<double>>();
        const int scene = int(std::max_element(scene_probs.begin(),
                                               scene_probs.end()) -
                              scene_probs.begin());
        std::array<double, kNumEvents> event_probs{};
        const auto ev = rec.at("event_probs").get<std::vector<double>>();
        std::copy(ev.begin(), ev.end(), event_probs.begin());
        std::array<double, kNumAq> aq{};
        const auto aqv = rec.at("aq").get<std::vector<double>>();
        std::copy(aqv.begin(), aqv.end(), aq.begin());

        const PromptPackage prompt = build_prompt(
            kSceneNames[std::size_t(scene)],
            threshold_events(event_probs, cfg.caption_threshold),
            rank_affect(aq), tmpl);
        const SoundscapeCaption caption =
            generate_caption(clip_id, prompt, client, cfg.llm);

        json prec;
        prec["clip_id"] = clip_id;
        prec["system"] = prompt.system_text;
        prec["user"] = prompt.user_text;
        prompt_lines << prec.dump() << '\n';

        json out;
        out["clip_id"] = caption.clip_id;
        out["text"] = caption.text;
        out["model_id"] = caption.model_id;
        out["template_version"] = caption.template_version;
        out["attempts"] = caption.attempts;
        lines << out.dump() << '\n';
    }
    write_text_file(
        (fs::path(cfg.output_dir) / ("captions_" + split + ".jsonl")).string(),
        lines.str());
    write_text_file(
        (fs::path(cfg.output_dir) / ("prompts_" + split + ".jsonl")).string(),
        prompt_lines.str());
    record_run(cfg, "caption");
    std::ostringstream out;
    out << "caption: " << records.size() << " clips (" << split << ", "
        << (cfg.llm_stub ? "stub" : "http") << " client)";
    return out.str();
}

std::string run_score_captions(const PipelineConfig& cfg,
                               const std::string& ratings_path) {
    const std::vector<ThumbsRating> ratings = load_ratings(ratings_path);
    const std::vector<GroupStats> groups = aggregate(ratings);

    // Rater-mean score per (caption, source), paired across sources.
    std::map<std::pair<std::string, std::string>, std::vector<double>> scores;
    for (const ThumbsRating& r : ratings)
        scores[{r.caption_id, r.source}].push_back(thumbs_score(r));
    std::set<std::string> caption_ids;
    for (const auto& [key, vals] : scores) caption_ids.insert(key.first);
    std::vector<double> expert, system;
    for (const std::string& id : caption_ids) {
        const auto e = scores.find({id, "expert"});
        const auto s = scores.find({id, "system"});
        if (e == scores.end() || s == scores.end()) continue;
        auto mean = [](const std::vector<double>& v) {
            double acc = 0.0;
            for (double x : v) acc += x;
            return acc / double(v.size());
        };
        expert.push_back(mean(e->second));
        system.push_back(mean(s->second));
    }

    json j;
    j["config_hash"] = config_hash(cfg);
    j["ratings"] = int(ratings.size());
    for (const GroupStats& g : groups) {
        json gj;
        gj["source"] = g.source;
        gj["dataset"] = g.dataset;
        gj["n"] = g.n;
        const std::array<std::string, 6> fields = {"P", "R", "F",
                                                   "C", "I", "score"};
        for (std::size_t f = 0; f < fields.size(); ++f) {
            gj["mean"][fields[f]] = g.mean[f];
            gj["stddev"][fields[f]] = g.stddev[f];
        }
        j["groups"].push_back(gj);
    }
    if (expert.size() >= 3) {
        const PairedComparison cmp =
            compare_sources(expert, system, "score");
        j["comparison"]["field"] = cmp.field;
        j["comparison"]["normality"]["test"] = cmp.normality.test_name;
        j["comparison"]["normality"]["statistic"] = cmp.normality.statistic;
        j["comparison"]["normality"]["p"] = cmp.normality.p_value;
        j["comparison"]["test"]["test"] = cmp.test.test_name;
        j["comparison"]["test"]["statistic"] = cmp.test.statistic;
        j["comparison"]["test"]["p"] = cmp.test.p_value;
        j["comparison"]["test"]["stars"] =
            significance_stars(cmp.test.p_value);
        j["comparison"]["notes"] = cmp.test.notes;
    } else {
        j["comparison"] = nullptr; // too few paired captions
    }
    fs::create_directories(cfg.output_dir);
    write_text_file(
        (fs::path(cfg.output_dir) / "caption_scores.json").string(),
        j.dump(2) + "\n");
    record_run(cfg, "score-captions");
    std::ostringstream out;
    out << "score-captions: " << ratings.size() << " ratings, "
        << groups.size() << " groups, " << expert.size() << " paired captions";
    return out.str();
}

std::string run_analyze_correlations(const PipelineConfig& cfg,
                                     const std::string& split) {
    const auto [meta, records] = read_jsonl(predictions_path(cfg, split));
    (void)meta;
    const DatasetManifest manifest = load_manifest(cfg.manifest_path);
    std::map<std::string, const ClipRecord*> by_id;
    for (const ClipRecord& rec : manifest.records) by_id[rec.clip_id] = &rec;

    std::vector<std::array<double, kNumEvents>> event_probs;
    std::vector<std::array<double, kNumAq>> aq_values;
    for (const json& rec : records) {
        const std::string clip_id = rec.at("clip_id").get<std::string>();
        const auto it = by_id.find(clip_id);
        if (it == by_id.end())
            throw ValidationError("prediction for unknown clip " + clip_id);
        std::array<double, kNumEvents> ev{};
        const auto evv = rec.at("event_probs").get<std::vector<double>>();
        std::copy(evv.begin(), evv.end(), ev.begin());
        event_probs.push_back(ev);
        aq_values.push_back(aq_as_double(it->second->aq_responses));
    }

    const auto matrix = correlation_matrix(event_probs, aq_values);
    json j;
    j["config_hash"] = config_hash(cfg);
    j["split"] = split;
    j["n"] = int(records.size());
    for (int e = 0; e < kNumEvents; ++e) {
        json row;
        row["event"] = kEventNames[std::size_t(e)];
        for (int a = 0; a < kNumAq; ++a) {
            const CorrelationCell& cell = matrix[std::size_t(e)][std::size_t(a)];
            json cj;
            cj["aq"] = kAqNames[std::size_t(a)];
            cj["defined"] = cell.defined;
            if (cell.defined) {
                cj["rho"] = cell.rho;
                cj["p"] = cell.p;
                cj["stars"] = cell.stars;
            }
            row["cells"].push_back(cj);
        }
        j["matrix"].push_back(row);
    }
    fs::create_directories(cfg.output_dir);
    write_text_file(
        (fs::path(cfg.output_dir) / "event_aq_correlations.json").string(),
        j.dump(2) + "\n");
    record_run(cfg, "analyze-correlations");
    std::ostringstream out;
    out << "analyze-correlations: " << records.size() << " clips (" << split
        << ")";
    return out.str();
}

std::string run_make_fixture(const std::string& root, std::uint64_t seed) {
    FixtureSpec spec;
    spec.root = root;
    spec.seed = seed;
    make_fixture(spec);

    PipelineConfig cfg;
    const fs::path base(root);
    cfg.manifest_path = (base / "manifest.csv").string();
    cfg.calibration_path = (base / "audio" / "calibration.wav").string();
    cfg.tagger_dir = (base / "tagger").string();
    cfg.feature_dir = (base / "artifacts" / "features").string();
    cfg.checkpoint_dir = (base / "artifacts" / "checkpoints").string();
    cfg.output_dir = (base / "artifacts" / "outputs").string();
    cfg.seed = seed;
    save_pipeline_config((base / "config.json").string(), cfg);

    std::ostringstream out;
    out << "make-fixture: " << spec.n_clips << " clips under " << root;
    return out.str();
}

} // namespace ssc

// Command-line front end. Talks to the library exclusively through the C
// interface; every subcommand prints the stage summary on success and
// "<Kind>: <message>" on stderr on failure.
//
// Exit codes: 0 success, 1 pipeline failure, 2 usage error (bad flags, or
// a required upstream artifact is missing because stages ran out of order).

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "soundscaper.h"

namespace {

struct ConfigDeleter {
    void operator()(ssc_config* cfg) const { ssc_config_destroy(cfg); }
};
using ConfigPtr = std::unique_ptr<ssc_config, ConfigDeleter>;

// Takes the summary by pointer: the status expression at the call site is
// what fills it, and argument evaluation order is unspecified.
int report(ssc_status status, char** summary) {
    if (status != SSC_OK) {
        std::fprintf(stderr, "%s\n", ssc_last_error());
        return status == SSC_ERR_MISSING ? 2 : 1;
    }
    if (*summary != nullptr && **summary != '\0')
        std::printf("%s\n", *summary);
    ssc_string_free(*summary);
    return 0;
}

// Builds the config from --config / --seed / --override, or fails with the
// pipeline exit code.
int make_config(const std::string& config_path, bool seed_set,
                std::uint64_t seed, int jobs,
                const std::vector<std::string>& overrides, ConfigPtr& out) {
    ssc_config* raw = nullptr;
    const ssc_status st = config_path.empty()
                              ? ssc_config_create(&raw)
                              : ssc_config_load(config_path.c_str(), &raw);
    if (st != SSC_OK) {
        std::fprintf(stderr, "%s\n", ssc_last_error());
        return 1;
    }
    out.reset(raw);
    for (const std::string& assignment : overrides)
        if (ssc_config_override(out.get(), assignment.c_str()) != SSC_OK) {
            std::fprintf(stderr, "%s\n", ssc_last_error());
            return 1;
        }
    if (seed_set && ssc_config_set_seed(out.get(), seed) != SSC_OK) {
        std::fprintf(stderr, "%s\n", ssc_last_error());
        return 1;
    }
    if (jobs > 0) {
        const std::string assignment = "jobs=" + std::to_string(jobs);
        if (ssc_config_override(out.get(), assignment.c_str()) != SSC_OK) {
            std::fprintf(stderr, "%s\n", ssc_last_error());
            return 1;
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"soundscape captioning pipeline"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::simple);

    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "pipeline config JSON");
    app.add_option("--seed", seed, "run seed")->each([&](const std::string&) {
        seed_set = true;
    });
    app.add_option("--override", overrides,
                   "config override, dotted.key=value (repeatable)");
    int jobs = 0;
    app.add_option("--jobs", jobs, "parallel worker bound");

    auto* fixture = app.add_subcommand(
        "make-fixture", "write the synthetic demo dataset and its config");
    std::string fixture_root;
    std::uint64_t fixture_seed = 7;
    fixture->add_option("root", fixture_root, "output directory")->required();
    fixture->add_option("--seed", fixture_seed, "generation seed");

    app.add_subcommand("extract-features",
                       "compute and cache the per-clip feature matrices");
    app.add_subcommand("pseudo-label",
                       "derive hard event labels from tagger probabilities");

    auto* split_cmd =
        app.add_subcommand("split", "assign train/val/test splits");
    std::size_t n_train = 0, n_val = 0, n_test = 0;
    split_cmd->add_option("--train", n_train, "train clips")->required();
    split_cmd->add_option("--val", n_val, "validation clips")->required();
    split_cmd->add_option("--test", n_test, "test clips")->required();

    app.add_subcommand("train", "train the model on the cached features");

    auto* predict_cmd =
        app.add_subcommand("predict", "run the best checkpoint over a split");
    std::string predict_split = "test";
    predict_cmd->add_option("--split", predict_split,
                            "train, val, test or all");

    auto* caption_cmd =
        app.add_subcommand("caption", "turn predictions into captions");
    std::string caption_split = "test";
    bool caption_force = false;
    caption_cmd->add_option("--split", caption_split,
                            "train, val, test or all");
    caption_cmd->add_flag("--force", caption_force,
                          "accept predictions from a different config");

    auto* score_cmd = app.add_subcommand(
        "score-captions", "aggregate rater scores and compare sources");
    std::string ratings_path;
    score_cmd->add_option("ratings", ratings_path, "rater CSV")->required();

    auto* corr_cmd = app.add_subcommand(
        "analyze-correlations",
        "correlate predicted events with quality responses");
    std::string corr_split = "all";
    corr_cmd->add_option("--split", corr_split, "train, val, test or all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    char* summary = nullptr;
    if (fixture->parsed())
        return report(
            ssc_make_fixture(fixture_root.c_str(), fixture_seed, &summary),
            &summary);

    ConfigPtr cfg;
    const int rc = make_config(config_path, seed_set, seed, jobs, overrides, cfg);
    if (rc != 0) return rc;

    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "extract-features")
        return report(ssc_extract_features(cfg.get(), &summary), &summary);
    if (sub == "pseudo-label")
        return report(ssc_pseudo_label(cfg.get(), &summary), &summary);
    if (sub == "split")
        return report(ssc_split(cfg.get(), n_train, n_val, n_test, &summary),
                      &summary);
    if (sub == "train")
        return report(ssc_train(cfg.get(), &summary), &summary);
    if (sub == "predict")
        return report(ssc_predict(cfg.get(), predict_split.c_str(), &summary),
                      &summary);
    if (sub == "caption")
        return report(ssc_caption(cfg.get(), caption_split.c_str(),
                                  caption_force ? 1 : 0, &summary),
                      &summary);
    if (sub == "score-captions")
        return report(
            ssc_score_captions(cfg.get(), ratings_path.c_str(), &summary),
            &summary);
    if (sub == "analyze-correlations")
        return report(
            ssc_analyze_correlations(cfg.get(), corr_split.c_str(), &summary),
            &summary);
    std::fprintf(stderr, "unknown subcommand\n");
    return 2;
}

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "doctest.h"

#include "common/errors.hpp"
#include "common/textio.hpp"
#include "ingest/manifest.hpp"
#include "pipeline/config.hpp"
#include "pipeline/fixture.hpp"
#include "pipeline/pipeline.hpp"
#include "test_util.hpp"

using namespace ssc;
using ssc_test::TempDir;
namespace fs = std::filesystem;

TEST_SUITE("pipeline") {

TEST_CASE("config round-trips and rejects unknown keys") {
    TempDir dir("cfg");
    PipelineConfig cfg;
    cfg.seed = 123;
    cfg.train.batch_size = 4;
    cfg.caption_threshold = 0.25;
    save_pipeline_config(dir.str("c.json"), cfg);
    const PipelineConfig back = load_pipeline_config(dir.str("c.json"));
    CHECK(back.seed == 123);
    CHECK(back.train.batch_size == 4);
    CHECK(back.caption_threshold == doctest::Approx(0.25));
    CHECK(config_hash(back) == config_hash(cfg));

    {
        std::ofstream f(dir.str("bad.json"));
        f << "{\"thresholds\": {\"per_minute\": 0.5}}";
    }
    CHECK_THROWS_AS(load_pipeline_config(dir.str("bad.json")),
                    ValidationError);
    {
        std::ofstream f(dir.str("junk.json"));
        f << "{ not json";
    }
    CHECK_THROWS_AS(load_pipeline_config(dir.str("junk.json")), ParseError);
}

TEST_CASE("dotted overrides update values and keep their types") {
    PipelineConfig cfg;
    const std::uint64_t before = config_hash(cfg);
    apply_override(cfg, "train.max_epochs=7");
    CHECK(cfg.train.max_epochs == 7);
    apply_override(cfg, "paths.output_dir=elsewhere");
    CHECK(cfg.output_dir == "elsewhere");
    apply_override(cfg, "llm.stub=false");
    CHECK_FALSE(cfg.llm_stub);
    apply_override(cfg, "thresholds.caption=0.4");
    CHECK(cfg.caption_threshold == doctest::Approx(0.4));
    CHECK(config_hash(cfg) != before);

    CHECK_THROWS_AS(apply_override(cfg, "nope.key=1"), ValidationError);
    CHECK_THROWS_AS(apply_override(cfg, "train.max_epochs=fast"),
                    ValidationError);
    CHECK_THROWS_AS(apply_override(cfg, "garbage"), ValidationError);
}

TEST_CASE("fixture generation, feature caching and pseudo-labels agree") {
    TempDir dir("fixture");
    run_make_fixture(dir.str(), 7);

    for (const char* f :
         {"manifest.csv", "config.json", "ratings.csv", "audio/clip_00.wav",
          "audio/calibration.wav", "tagger/clip_07.txt", "tagger/classes.txt",
          "tagger/maskers.txt"})
        CHECK(fs::exists(dir.path() / f));

    const PipelineConfig cfg = load_pipeline_config(dir.str("config.json"));
    const DatasetManifest manifest = load_manifest(cfg.manifest_path);
    REQUIRE(manifest.records.size() == 8);
    CHECK(manifest.in_split(Split::train).size() == 5);
    CHECK(manifest.in_split(Split::val).size() == 2);
    CHECK(manifest.in_split(Split::test).size() == 1);

    // features are absent until extraction runs
    CHECK_THROWS_AS(load_split_samples(cfg, "train"), CacheMissError);

    const std::string first = run_extract_features(cfg);
    CHECK(first.find("8 extracted") != std::string::npos);
    const std::string second = run_extract_features(cfg);
    CHECK(second.find("0 extracted") != std::string::npos);
    CHECK(second.find("8 cached") != std::string::npos);

    const auto train_set = load_split_samples(cfg, "train");
    CHECK(train_set.size() == 5);
    for (const TrainSample& s : train_set) {
        CHECK(s.features.mel.n_frames == 300);
        CHECK(s.features.loudness.n_frames >= 1499);
    }
    CHECK(load_split_samples(cfg, "all").size() == 8);

    // a config change invalidates the cache
    PipelineConfig changed = cfg;
    changed.per_second_threshold = 0.6;
    CHECK_THROWS_AS(load_split_samples(changed, "train"), CacheMissError);

    // pseudo-labels reconstruct the manifest's event annotations
    run_pseudo_label(cfg);
    const auto vocab_lines = read_lines(
        (fs::path(cfg.output_dir) / "event_vocabulary.txt").string());
    std::set<std::string> vocab(vocab_lines.begin(), vocab_lines.end());
    vocab.erase("");
    CHECK(vocab.size() == 15);
    for (const auto& name : kEventNames) CHECK(vocab.count(name) == 1);

    const auto csv = read_lines(
        (fs::path(cfg.output_dir) / "pseudo_labels.csv").string());
    REQUIRE(csv.size() >= 9);
    // column e<k> holds vocabulary line k-1
    std::map<std::string, int> col; // vocabulary name -> column
    {
        int c = 1;
        for (const auto& line : vocab_lines)
            if (!line.empty()) col[line] = c++;
    }
    for (std::size_t row = 1; row <= 8; ++row) {
        const auto cells = split(csv[row], ',');
        const ClipRecord* rec = nullptr;
        for (const auto& r : manifest.records)
            if (r.clip_id == cells[0]) rec = &r;
        REQUIRE(rec != nullptr);
        for (int e = 0; e < kNumEvents; ++e) {
            const int got = int(cells[std::size_t(
                                    col.at(kEventNames[std::size_t(e)]))][0] -
                                '0');
            CHECK(got == rec->event_multihot[std::size_t(e)]);
        }
    }

    // run metadata is written per subcommand
    CHECK(fs::exists(fs::path(cfg.output_dir) / "runs" /
                     "extract-features.json"));
    CHECK(fs::exists(fs::path(cfg.output_dir) / "runs" / "pseudo-label.json"));
}

TEST_CASE("fixture generation is deterministic in its seed") {
    TempDir a("fx_a"), b("fx_b");
    run_make_fixture(a.str(), 21);
    run_make_fixture(b.str(), 21);
    for (const char* f : {"manifest.csv", "tagger/clip_03.txt", "ratings.csv"})
        CHECK(read_text_file((a.path() / f).string()) ==
              read_text_file((b.path() / f).string()));
    // audio bytes too
    CHECK(read_text_file((a.path() / "audio/clip_05.wav").string()) ==
          read_text_file((b.path() / "audio/clip_05.wav").string()));
}

} // TEST_SUITE

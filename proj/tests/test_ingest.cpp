#include <algorithm>
#include <fstream>
#include <map>
#include <random>

#include "doctest.h"

#include "common/errors.hpp"
#include "common/wav.hpp"
#include "ingest/manifest.hpp"
#include "ingest/pseudo_label.hpp"
#include "test_util.hpp"

using namespace ssc;
using ssc_test::TempDir;

TEST_SUITE("ingest") {

TEST_CASE("tagger prob files round-trip both granularities") {
    TempDir dir("tagger");
    TaggerProbFile f;
    f.clip_id = "clip";
    f.granularity = ProbGranularity::per_second;
    f.probs = {{0.1, 0.25, 0.9}, {0.5, 0.5, 0.5}};
    save_tagger_probs(f, dir.str("a.txt"));
    const TaggerProbFile back = load_tagger_probs(dir.str("a.txt"), "clip", 3);
    CHECK(back.granularity == ProbGranularity::per_second);
    REQUIRE(back.probs.size() == 2);
    CHECK(back.probs[0][1] == doctest::Approx(0.25).epsilon(1e-12));

    f.granularity = ProbGranularity::per_clip;
    f.probs = {{0.0, 1.0, 0.3}};
    save_tagger_probs(f, dir.str("b.txt"));
    CHECK(load_tagger_probs(dir.str("b.txt"), "clip", 3).granularity ==
          ProbGranularity::per_clip);

    CHECK_THROWS_AS(load_tagger_probs(dir.str("b.txt"), "clip", 4),
                    ParseError);
}

TEST_CASE("binarization is strict: values equal to the threshold stay off") {
    const std::vector<double> probs = {0.0, 0.5, 0.5000001, 0.4999999, 1.0};
    const std::vector<int> bits = binarize_probs(probs, 0.5);
    // independent recount
    for (std::size_t i = 0; i < probs.size(); ++i)
        CHECK(bits[i] == (probs[i] > 0.5 ? 1 : 0));
    CHECK(bits[1] == 0);
}

TEST_CASE("event ranking matches a hand column recount") {
    std::mt19937_64 rng(11);
    std::vector<std::vector<int>> hard(40, std::vector<int>(9, 0));
    for (auto& row : hard)
        for (auto& v : row) v = int(rng() % 2);

    // oracle: recount column sums independently
    std::vector<std::int64_t> counts(9, 0);
    for (const auto& row : hard)
        for (std::size_t k = 0; k < row.size(); ++k) counts[k] += row[k];

    const auto ranked = rank_event_occurrences(hard);
    REQUIRE(ranked.size() == 9);
    for (const auto& [cls, count] : ranked) CHECK(count == counts[cls]);
    for (std::size_t i = 1; i < ranked.size(); ++i) {
        const bool desc = ranked[i - 1].second > ranked[i].second;
        const bool tie_by_index = ranked[i - 1].second == ranked[i].second &&
                                  ranked[i - 1].first < ranked[i].first;
        CHECK((desc || tie_by_index));
    }
}

TEST_CASE("vocabulary selection keeps maskers and fills by rank") {
    std::vector<std::string> names;
    for (int i = 0; i < 30; ++i) names.push_back("c" + std::to_string(i));
    // counts 30-i so class 0 is top ranked
    std::vector<std::pair<int, std::int64_t>> ranked;
    for (int i = 0; i < 30; ++i) ranked.push_back({i, 30 - i});
    // maskers deep down the ranking
    const std::vector<int> maskers = {25, 28};

    const auto vocab = select_target_events(ranked, maskers, names);
    REQUIRE(vocab.size() == 15);
    // maskers survive despite their rank
    CHECK(std::count(vocab.begin(), vocab.end(), "c25") == 1);
    CHECK(std::count(vocab.begin(), vocab.end(), "c28") == 1);
    // the remaining 13 slots go to the highest-ranked classes, in rank order
    for (int i = 0; i < 13; ++i) CHECK(vocab[i] == "c" + std::to_string(i));

    CHECK_THROWS_AS(
        select_target_events({{0, 5}, {1, 3}}, {}, names), VocabularyError);
}

TEST_CASE("manifest loads audio metadata and survives a round trip") {
    TempDir dir("manifest");
    write_wav(dir.str("a.wav"), ssc_test::sine(440, 0.1, 3.0, 16000), 16000);
    write_wav(dir.str("b.wav"), ssc_test::sine(880, 0.1, 3.5, 16000), 16000);
    const std::string header =
        "clip_id,audio_path,scene,e1,e2,e3,e4,e5,e6,e7,e8,e9,e10,e11,e12,e13,"
        "e14,e15,aq1,aq2,aq3,aq4,aq5,aq6,aq7,aq8,split";
    const std::string body =
        "a,a.wav,park,1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,5,2,1,3,4,5,1,2,train\n"
        "b,b.wav,street traffic,0,0,0,0,0,1,1,0,0,0,0,0,0,0,0,1,4,5,2,2,1,5,"
        "4,val\n";
    {
        std::ofstream f(dir.str("m.csv"));
        f << header << "\n" << body;
    }
    const DatasetManifest m = load_manifest(dir.str("m.csv"));
    REQUIRE(m.records.size() == 2);
    CHECK(m.records[0].scene == 1);
    CHECK(m.records[0].sample_rate == 16000);
    CHECK(m.records[0].duration_s == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(m.records[0].event_multihot[0] == 1);
    CHECK(m.records[1].aq_responses[2] == 5);
    CHECK(m.records[1].split == Split::val);

    save_manifest(m, dir.str("m2.csv"));
    const DatasetManifest back = load_manifest(dir.str("m2.csv"));
    REQUIRE(back.records.size() == 2);
    CHECK(back.records[1].clip_id == "b");
    CHECK(back.records[1].aq_responses == m.records[1].aq_responses);
}

TEST_CASE("manifest rejects short clips and missing audio") {
    TempDir dir("manifest_bad");
    write_wav(dir.str("short.wav"), ssc_test::sine(440, 0.1, 1.0, 16000),
              16000);
    const std::string header =
        "clip_id,audio_path,scene,e1,e2,e3,e4,e5,e6,e7,e8,e9,e10,e11,e12,e13,"
        "e14,e15,aq1,aq2,aq3,aq4,aq5,aq6,aq7,aq8,split";
    {
        std::ofstream f(dir.str("m.csv"));
        f << header << "\n"
          << "s,short.wav,park,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,3,3,3,3,3,3,3,3,"
             "train\n";
    }
    CHECK_THROWS_AS(load_manifest(dir.str("m.csv")), ValidationError);
    {
        std::ofstream f(dir.str("m2.csv"));
        f << header << "\n"
          << "g,gone.wav,park,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,3,3,3,3,3,3,3,3,"
             "train\n";
    }
    CHECK_THROWS_AS(load_manifest(dir.str("m2.csv")), MissingAudioError);
}

TEST_CASE("split assignment is reproducible and disjoint") {
    TempDir dir("splits");
    DatasetManifest m;
    for (int i = 0; i < 10; ++i) {
        ClipRecord r;
        r.clip_id = "c" + std::to_string(i);
        m.records.push_back(r);
    }
    const DatasetManifest a = split_dataset(m, {5, 3, 2}, 99);
    const DatasetManifest b = split_dataset(m, {5, 3, 2}, 99);
    const DatasetManifest c = split_dataset(m, {5, 3, 2}, 100);
    std::map<Split, int> tally;
    bool differs_from_c = false;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].split == b.records[i].split);
        if (a.records[i].split != c.records[i].split) differs_from_c = true;
        tally[a.records[i].split]++;
    }
    CHECK(tally[Split::train] == 5);
    CHECK(tally[Split::val] == 3);
    CHECK(tally[Split::test] == 2);
    CHECK(differs_from_c); // a different seed moves at least one clip

    CHECK_THROWS_AS(split_dataset(m, {9, 1, 1}, 0), SizeError);
}

} // TEST_SUITE

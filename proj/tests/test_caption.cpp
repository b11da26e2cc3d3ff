#include <algorithm>
#include <fstream>

#include "doctest.h"

#include "caption/llm_client.hpp"
#include "caption/prompt.hpp"
#include "common/errors.hpp"
#include "test_util.hpp"

using namespace ssc;
using ssc_test::TempDir;

TEST_SUITE("caption") {

TEST_CASE("event thresholding is strict and sorts by probability") {
    std::array<double, kNumEvents> probs{};
    probs.fill(0.0);
    probs[2] = 0.3; // exactly at the threshold: excluded
    probs[4] = 0.31;
    probs[7] = 0.9;
    probs[9] = 0.31; // tie with index 4: vocabulary order preserved

    const auto events = threshold_events(probs);
    // brute-force oracle
    std::vector<std::string> expected;
    for (int e = 0; e < kNumEvents; ++e)
        if (probs[std::size_t(e)] > 0.3)
            expected.push_back(kEventNames[std::size_t(e)]);
    std::stable_sort(expected.begin(), expected.end(),
                     [&](const std::string& a, const std::string& b) {
                         auto idx = [&](const std::string& s) {
                             return std::find(kEventNames.begin(),
                                              kEventNames.end(), s) -
                                    kEventNames.begin();
                         };
                         return probs[std::size_t(idx(a))] >
                                probs[std::size_t(idx(b))];
                     });
    REQUIRE(events.size() == expected.size());
    for (std::size_t i = 0; i < events.size(); ++i)
        CHECK(events[i].name == expected[i]);
    CHECK(events[0].name == kEventNames[7]);
    CHECK(events[1].name == kEventNames[4]); // tie keeps vocabulary order
    CHECK(events[2].name == kEventNames[9]);

    probs[0] = 1.5;
    CHECK_THROWS_AS(threshold_events(probs), RangeError);
}

TEST_CASE("affect ranking keeps all eight qualities, ties stable") {
    std::array<double, kNumAq> aq = {3.0, 4.5, 2.0, 4.5, 1.0, 3.0, 5.0, 2.5};
    const auto ranked = rank_affect(aq);
    REQUIRE(ranked.size() == 8);
    CHECK(ranked[0].name == "annoying"); // 5.0
    CHECK(ranked[1].name == "eventful"); // first of the 4.5 tie
    CHECK(ranked[2].name == "vibrant");
    CHECK(ranked[7].name == "uneventful");
}

TEST_CASE("prompt assembly fills every placeholder deterministically") {
    const PromptTemplate& tmpl = default_prompt_template();
    CHECK(tmpl.version == "v1");

    std::array<double, kNumEvents> probs{};
    probs[0] = 0.9;
    probs[5] = 0.4;
    std::array<double, kNumAq> aq;
    for (int a = 0; a < kNumAq; ++a) aq[std::size_t(a)] = 1.0 + 0.5 * a;

    const PromptPackage pkg =
        build_prompt("park", threshold_events(probs), rank_affect(aq), tmpl);
    CHECK(pkg.max_output_tokens == 200);
    CHECK(pkg.template_version == "v1");
    CHECK(pkg.user_text.find("park") != std::string::npos);
    CHECK(pkg.user_text.find("- Bird (0.90)") != std::string::npos);
    CHECK(pkg.user_text.find("- Vehicle (0.40)") != std::string::npos);
    CHECK(pkg.user_text.find("- monotonous: 4.5") != std::string::npos);
    CHECK(pkg.user_text.find("Step 1") != std::string::npos);
    CHECK(pkg.user_text.find("Step 2") != std::string::npos);
    CHECK(pkg.user_text.find('{') == std::string::npos);
    CHECK(pkg.system_text.find("ISO 12913-1") != std::string::npos);

    // empty event list renders the explicit no-events line
    std::array<double, kNumEvents> none{};
    const PromptPackage quiet =
        build_prompt("park", threshold_events(none), rank_affect(aq), tmpl);
    CHECK(quiet.user_text.find("no salient events detected") !=
          std::string::npos);

    // two identical inputs produce byte-identical prompts
    const PromptPackage again =
        build_prompt("park", threshold_events(probs), rank_affect(aq), tmpl);
    CHECK(again.user_text == pkg.user_text);
    CHECK(again.system_text == pkg.system_text);
}

TEST_CASE("template files load and reject malformed placeholders") {
    TempDir dir("tmpl");
    {
        std::ofstream f(dir.str("t.txt"));
        f << "version: v9\n[system]\nsys text\n[user]\nscene={scene}\n";
    }
    const PromptTemplate t = load_prompt_template(dir.str("t.txt"));
    CHECK(t.version == "v9");
    CHECK(t.system_text == "sys text");

    {
        std::ofstream f(dir.str("bad.txt"));
        f << "version: v9\n[system]\ns\n[user]\n{unknown_key}\n";
    }
    const PromptTemplate bad = load_prompt_template(dir.str("bad.txt"));
    CHECK_THROWS_AS(build_prompt("park", {}, {}, bad), TemplateError);

    {
        std::ofstream f(dir.str("unterm.txt"));
        f << "version: v9\n[system]\ns\n[user]\n{scene\n";
    }
    CHECK_THROWS_AS(
        build_prompt("park", {}, {}, load_prompt_template(dir.str("unterm.txt"))),
        TemplateError);

    {
        std::ofstream f(dir.str("nover.txt"));
        f << "[system]\ns\n[user]\nu\n";
    }
    CHECK_THROWS_AS(load_prompt_template(dir.str("nover.txt")), TemplateError);
}

TEST_CASE("bundled template asset matches the built-in fallback") {
    const PromptTemplate fromfile =
        load_prompt_template(std::string(SSC_SOURCE_DIR) +
                             "/assets/caption_prompt_v1.txt");
    const PromptTemplate& builtin = default_prompt_template();
    CHECK(fromfile.version == builtin.version);
    CHECK(fromfile.system_text == builtin.system_text);
    CHECK(fromfile.user_text == builtin.user_text);
}

TEST_CASE("caption generation retries transient failures with a cap") {
    LlmConfig cfg;
    cfg.backoff_ms = 0; // keep the test fast
    PromptPackage prompt;
    prompt.user_text = "hello";
    prompt.template_version = "v1";

    StubCaptionClient ok({{false, "a caption"}});
    const SoundscapeCaption cap = generate_caption("c1", prompt, ok, cfg);
    CHECK(cap.text == "a caption");
    CHECK(cap.attempts == 1);
    CHECK(cap.clip_id == "c1");

    StubCaptionClient flaky(
        {{true, ""}, {true, ""}, {false, "third time lucky"}});
    const SoundscapeCaption cap3 = generate_caption("c2", prompt, flaky, cfg);
    CHECK(cap3.text == "third time lucky");
    CHECK(cap3.attempts == 3);
    CHECK(flaky.calls() == 3);

    StubCaptionClient doomed({{true, ""}, {true, ""}, {true, ""}, {true, ""}});
    CHECK_THROWS_AS(generate_caption("c3", prompt, doomed, cfg),
                    RateLimitError);
    CHECK(doomed.calls() == 3); // max_attempts bounds the retries

    StubCaptionClient empty({{false, ""}});
    CHECK_THROWS_AS(generate_caption("c4", prompt, empty, cfg),
                    EmptyResponseError);
}

TEST_CASE("echo stub is deterministic") {
    LlmConfig cfg;
    PromptPackage prompt;
    prompt.user_text = "echo me";
    StubCaptionClient echo;
    const CompletionResult a = echo.complete(prompt, cfg);
    const CompletionResult b = echo.complete(prompt, cfg);
    CHECK(a.text == "echo me");
    CHECK(a.text == b.text);
}

TEST_CASE("http client refuses to run without a credential") {
    LlmConfig cfg;
    cfg.api_key_env = "SSC_TEST_SURELY_UNSET_KEY";
    HttpCaptionClient client;
    PromptPackage prompt;
    CHECK_THROWS_AS(client.complete(prompt, cfg), AuthError);
}

} // TEST_SUITE

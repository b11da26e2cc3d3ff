#include <cmath>

#include "doctest.h"

#include "common/errors.hpp"
#include "objectives/circumplex.hpp"
#include "objectives/losses.hpp"

using namespace ssc;

namespace {

std::array<double, kNumAq> all_threes() {
    std::array<double, kNumAq> r;
    r.fill(3.0);
    return r;
}

} // namespace

TEST_SUITE("objectives") {

TEST_CASE("circumplex projections at hand-checked points") {
    CHECK(iso_pleasantness(all_threes()) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(iso_eventfulness(all_threes()) == doctest::Approx(0.0).epsilon(1e-12));

    // maximally pleasant corner: pleasant/calm/vibrant at 5, annoying/
    // chaotic/monotonous at 1, diagonal terms weighted sqrt(2)
    std::array<double, kNumAq> r = all_threes();
    r[kAqPleasant] = 5;
    r[kAqAnnoying] = 1;
    r[kAqCalm] = 5;
    r[kAqChaotic] = 1;
    r[kAqVibrant] = 5;
    r[kAqMonotonous] = 1;
    CHECK(iso_pleasantness(r) == doctest::Approx(1.0).epsilon(1e-12));
    std::array<double, kNumAq> lo = r;
    std::swap(lo[kAqPleasant], lo[kAqAnnoying]);
    std::swap(lo[kAqCalm], lo[kAqChaotic]);
    std::swap(lo[kAqVibrant], lo[kAqMonotonous]);
    CHECK(iso_pleasantness(lo) == doctest::Approx(-1.0).epsilon(1e-12));

    // hand arithmetic: only pleasant raised one step above neutral
    // -> sqrt(2) * 1 / (8 + sqrt(32))
    std::array<double, kNumAq> p1 = all_threes();
    p1[kAqPleasant] = 4;
    const double expect = std::sqrt(2.0) / (8.0 + std::sqrt(32.0));
    CHECK(iso_pleasantness(p1) == doctest::Approx(expect).epsilon(1e-12));
    // same displacement on the eventful axis
    std::array<double, kNumAq> e1 = all_threes();
    e1[kAqEventful] = 4;
    CHECK(iso_eventfulness(e1) == doctest::Approx(expect).epsilon(1e-12));

    std::array<double, kNumAq> bad = all_threes();
    bad[0] = 0.5;
    CHECK_THROWS_AS(iso_pleasantness(bad), RangeError);
    bad[0] = 5.5;
    CHECK_THROWS_AS(iso_eventfulness(bad), RangeError);
}

TEST_CASE("integer-response overloads agree with the double form") {
    std::array<int, kNumAq> r = {5, 2, 1, 3, 4, 5, 1, 2};
    CHECK(iso_pleasantness(r) ==
          doctest::Approx(iso_pleasantness(aq_as_double(r))).epsilon(1e-15));
    CHECK(iso_eventfulness(r) ==
          doctest::Approx(iso_eventfulness(aq_as_double(r))).epsilon(1e-15));
}

TEST_CASE("per-task losses at hand-checked points") {
    LabelSet truth;
    truth.scene = 1;
    truth.events = {1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    truth.aq.fill(3);

    PredictionBundle pred;
    pred.scene_probs = {0.0, 1.0, 0.0}; // perfect
    pred.event_probs.fill(0.5);
    pred.isop = 0.0; // truth ISOP/ISOE of all-3 responses are 0
    pred.isoe = 0.0;
    for (int i = 0; i < kNumAq; ++i) pred.aq[i] = 4.0; // truth + 1

    const LossVector l = task_losses(pred, truth);
    CHECK(l.values[0] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(l.values[1] == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(l.values[2] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(l.values[3] == doctest::Approx(0.0).epsilon(1e-12));
    for (int i = 0; i < kNumAq; ++i)
        CHECK(l.values[4 + i] == doctest::Approx(1.0).epsilon(1e-12));

    // scene probability 0.25 -> CE = ln 4
    pred.scene_probs = {0.5, 0.25, 0.25};
    CHECK(task_losses(pred, truth).values[0] ==
          doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("uncertainty weighting at the stated points") {
    LossVector ones;
    ones.values.fill(1.0);
    std::array<double, kNumTasks> sigma;
    sigma.fill(1.0);
    CHECK(uncertainty_weighted_total(ones, sigma) ==
          doctest::Approx(7.0).epsilon(1e-12));

    // single regression term L = 2 at sigma = 2: 2/(2*4) + ln 2
    LossVector single;
    single.values.fill(0.0);
    single.values[2] = 2.0;
    sigma.fill(1.0);
    sigma[2] = 2.0;
    CHECK(uncertainty_weighted_total(single, sigma) ==
          doctest::Approx(0.25 + std::log(2.0)).epsilon(1e-12));

    sigma[5] = 0.0;
    CHECK_THROWS_AS(uncertainty_weighted_total(single, sigma), DomainError);
    sigma[5] = -1.0;
    CHECK_THROWS_AS(uncertainty_weighted_total(single, sigma), DomainError);
}

TEST_CASE("weighted total increases in every component loss") {
    std::array<double, kNumTasks> sigma;
    for (int i = 0; i < kNumTasks; ++i) sigma[i] = 0.5 + 0.25 * i;
    LossVector base;
    for (int i = 0; i < kNumTasks; ++i) base.values[i] = 0.1 * (i + 1);
    const double t0 = uncertainty_weighted_total(base, sigma);
    for (int i = 0; i < kNumTasks; ++i) {
        LossVector bumped = base;
        bumped.values[i] += 0.01;
        CHECK(uncertainty_weighted_total(bumped, sigma) > t0);
    }
}

} // TEST_SUITE

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "trustlab/bayes.hpp"
#include "trustlab/harness.hpp"

#include "fixtures.hpp"

using namespace trustlab;
using Catch::Matchers::WithinAbs;

namespace {

HypothesisSet canonical_pair(double prior0 = 0.5) {
    return HypothesisSet({{"theta0", fixtures::trustworthy(), prior0},
                          {"theta1", fixtures::untrustworthy(), 1.0 - prior0}});
}

} // namespace

TEST_CASE("posterior after observing a delay") {
    // oracle: .9*.5 / (.01*.5 + .9*.5) = .45/.455
    auto post = posterior(canonical_pair(), "d");
    CHECK_THAT(post.weight(1), WithinAbs(0.45 / 0.455, 1e-12));
    CHECK_THAT(post.weight(0) + post.weight(1), WithinAbs(1.0, kSumTolerance));
    CHECK_THAT(post.evidence(), WithinAbs(0.455, 1e-12));
}

TEST_CASE("posterior of identical profiles is the prior") {
    HypothesisSet same({{"x", fixtures::trustworthy(), 0.3},
                        {"y", fixtures::trustworthy(), 0.7}});
    auto post = posterior(same, "a");
    CHECK_THAT(post.weight(0), WithinAbs(0.3, 1e-12));
    CHECK_THAT(post.weight(1), WithinAbs(0.7, 1e-12));
}

TEST_CASE("degenerate prior stays degenerate") {
    auto post = posterior(canonical_pair(1.0), "a");
    CHECK(post.weight(0) == 1.0);
    CHECK(post.weight(1) == 0.0);
}

TEST_CASE("posterior error paths") {
    HypothesisSet no_priors({{"0", fixtures::trustworthy(), std::nullopt},
                             {"1", fixtures::untrustworthy(), std::nullopt}});
    CHECK_THROWS_AS(posterior(no_priors, "a"), MissingPriorsError);

    BehaviorProfile heads(fixtures::coin(), {1.0, 0.0});
    HypothesisSet impossible({{"0", heads, 0.5}, {"1", heads, 0.5}});
    CHECK_THROWS_AS(posterior(impossible, "t"), ZeroEvidenceError);
}

TEST_CASE("sequential update composes single-event posteriors") {
    auto hset = canonical_pair();
    auto empty = sequential_update(hset, {});
    CHECK_THAT(empty.weight(0), WithinAbs(0.5, 1e-12));

    auto two_step = sequential_update(hset, {"d", "d"});
    auto first = posterior(hset, "d");
    auto second = posterior(first.hypotheses, "d");
    CHECK_THAT(two_step.weight(0), WithinAbs(second.weight(0), 1e-12));
    CHECK_THAT(two_step.weight(1), WithinAbs(second.weight(1), 1e-12));
}

TEST_CASE("a long trustworthy stream overwhelms the alternative") {
    std::vector<std::string> stream(100, "a");
    auto post = sequential_update(canonical_pair(), stream);
    // batch oracle: weight ratio is 2^(100*log2(.98/.098))
    double log_ratio = 100.0 * std::log2(0.98 / 0.098);
    double expected0 = 1.0 / (1.0 + std::exp2(-log_ratio));
    CHECK(post.weight(0) > 0.999);
    CHECK_THAT(post.weight(0), WithinAbs(expected0, 1e-12));
}

TEST_CASE("map hypothesis and tie-breaking") {
    auto post = posterior(canonical_pair(), "d");
    CHECK(map_hypothesis(post).id == "theta1");

    HypothesisSet uniform({{"theta0", fixtures::trustworthy(), 0.5},
                           {"theta1", fixtures::trustworthy(), 0.5}});
    CHECK(map_hypothesis(posterior(uniform, "a")).id == "theta0");

    HypothesisSet singleton({{"only", fixtures::trustworthy(), 1.0}});
    CHECK(map_hypothesis(posterior(singleton, "a")).id == "only");
}

TEST_CASE("predictive mixture of the canonical pair") {
    auto mix = predictive(canonical_pair());
    CHECK_THAT(mix.prob("a"), WithinAbs(0.539, 1e-12));
    CHECK_THAT(mix.prob("b"), WithinAbs(0.003, 1e-12));
    CHECK_THAT(mix.prob("c"), WithinAbs(0.003, 1e-12));
    CHECK_THAT(mix.prob("d"), WithinAbs(0.455, 1e-12));

    HypothesisSet singleton({{"only", fixtures::trustworthy(), 1.0}});
    CHECK(predictive(singleton).prob("a") == 0.98);
}

TEST_CASE("property: sequential equals batch posterior from counts") {
    SplitMix64 rng(31);
    auto hset = canonical_pair();
    for (int round = 0; round < 100; ++round) {
        std::size_t n = 1 + rng.next() % 2000;
        auto stream = simulate_stream({predictive(hset), n, rng.next()});
        auto seq = sequential_update(hset, stream.events);
        auto batch = batch_posterior(hset, stream.observation);
        for (std::size_t i = 0; i < hset.size(); ++i)
            CHECK_THAT(seq.weight(i), WithinAbs(batch.weight(i), 1e-9));
    }
}

TEST_CASE("property: stream order does not change the posterior") {
    SplitMix64 rng(32);
    auto hset = canonical_pair();
    std::vector<std::string> stream;
    for (int i = 0; i < 500; ++i)
        stream.push_back(fixtures::abcd()->symbol(rng.next() % 4));
    auto forward = sequential_update(hset, stream);
    auto shuffled = stream;
    std::mt19937 shuffle_rng(99);
    std::shuffle(shuffled.begin(), shuffled.end(), shuffle_rng);
    auto permuted = sequential_update(hset, shuffled);
    for (std::size_t i = 0; i < hset.size(); ++i)
        CHECK_THAT(forward.weight(i), WithinAbs(permuted.weight(i), 1e-12));
}

TEST_CASE("property: prior scale cancels at the argmax") {
    // priors are normalized on input, so scaling shows up as identical sets
    SplitMix64 rng(33);
    for (int round = 0; round < 50; ++round) {
        double w0 = rng.next_double() + 0.01, w1 = rng.next_double() + 0.01;
        double scale = 1.0 + rng.next_double() * 9.0;
        auto normalized = [&](double a, double b) {
            return canonical_pair(a / (a + b));
        };
        auto base = posterior(normalized(w0, w1), "d");
        auto scaled = posterior(normalized(w0 * scale, w1 * scale), "d");
        CHECK_THAT(base.weight(0), WithinAbs(scaled.weight(0), 1e-12));
        CHECK(map_hypothesis(base).id == map_hypothesis(scaled).id);
    }
}

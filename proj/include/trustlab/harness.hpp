#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trustlab/core.hpp"
#include "trustlab/mdl.hpp"
#include "trustlab/rng.hpp"
#include "trustlab/testing.hpp"

namespace trustlab {

struct StreamSpec {
    BehaviorProfile profile;  // hidden truth
    std::size_t length = 1;
    std::uint64_t seed = 0;
};

struct SimulatedStream {
    std::vector<std::string> events;
    Observation observation;
};

/// i.i.d. draws via inverse CDF over declaration order; bit-identical across
/// runs and platforms for a fixed seed (SplitMix64, see rng.hpp).
inline SimulatedStream simulate_stream(const StreamSpec& spec) {
    if (spec.length == 0)
        throw OutOfRangeError("stream length must be positive");
    SplitMix64 rng(spec.seed);
    const auto& alphabet = spec.profile.alphabet();
    std::vector<std::string> events;
    events.reserve(spec.length);
    std::vector<std::uint64_t> counts(alphabet.size(), 0);
    for (std::size_t n = 0; n < spec.length; ++n) {
        double u = rng.next_double();
        double cumulative = 0.0;
        std::size_t drawn = alphabet.size() - 1;
        for (std::size_t i = 0; i < alphabet.size(); ++i) {
            cumulative += spec.profile.prob(i);
            if (u < cumulative) {
                drawn = i;
                break;
            }
        }
        events.push_back(alphabet.symbol(drawn));
        ++counts[drawn];
    }
    return SimulatedStream{std::move(events),
                           Observation(spec.profile.alphabet_ptr(), std::move(counts))};
}

struct ErrorRateReport {
    double fpr_hat = 0.0;
    double fnr_hat = 0.0;
    std::uint64_t trials = 0;
    double alpha_requested = 0.0;
    double wilson_halfwidth = 0.0;
};

namespace detail {

/// 95% Wilson score interval half-width for a frequency estimate.
inline double wilson_halfwidth(double p_hat, double n) {
    constexpr double z = 1.959963984540054;
    double z2 = z * z;
    return z / (1.0 + z2 / n) *
           std::sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n));
}

} // namespace detail

/// Monte Carlo estimate of the single-event NP test's false positive and
/// false negative rates. Per-trial seeds derive from the master seed so the
/// result is independent of execution order.
inline ErrorRateReport monte_carlo_error_rates(const BehaviorProfile& p0,
                                               const BehaviorProfile& p1,
                                               double alpha, std::uint64_t trials,
                                               std::uint64_t seed,
                                               bool randomized = false) {
    if (trials < 1)
        throw OutOfRangeError("need at least one trial");
    std::uint64_t false_positives = 0, false_negatives = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::uint64_t trial_seed = derive_seed(seed, t);
        SplitMix64 rng(trial_seed);
        // one event under each hypothesis, decided by the same test
        auto draw = [&](const BehaviorProfile& truth) {
            double u = rng.next_double();
            double cumulative = 0.0;
            for (std::size_t i = 0; i + 1 < truth.probs().size(); ++i) {
                cumulative += truth.prob(i);
                if (u < cumulative) return i;
            }
            return truth.probs().size() - 1;
        };
        std::uint64_t coin_seed = rng.next();
        std::size_t x0 = draw(p0);
        std::size_t x1 = draw(p1);
        auto decide = [&](std::size_t x) {
            return np_decide(p0, p1, alpha, p0.alphabet().symbol(x), randomized,
                             coin_seed)
                       .decision.verdict == Verdict::Reject;
        };
        if (decide(x0)) ++false_positives;
        if (!decide(x1)) ++false_negatives;
    }
    ErrorRateReport report;
    report.trials = trials;
    report.alpha_requested = alpha;
    report.fpr_hat = static_cast<double>(false_positives) / static_cast<double>(trials);
    report.fnr_hat = static_cast<double>(false_negatives) / static_cast<double>(trials);
    report.wilson_halfwidth =
        detail::wilson_halfwidth(report.fpr_hat, static_cast<double>(trials));
    return report;
}

struct BruteForceRegion {
    std::vector<std::string> region;  // declaration order
    double size = 0.0;
    double power = 0.0;
};

/// Exhaustive most-powerful deterministic region with size <= alpha.
/// Ties prefer smaller size, then the lexicographically smaller region in
/// declaration-order bit encoding. Deliberately naive; independent of the
/// np_threshold path.
inline BruteForceRegion brute_force_most_powerful(const BehaviorProfile& p0,
                                                  const BehaviorProfile& p1,
                                                  double alpha) {
    require_same_alphabet(p0.alphabet(), p1.alphabet());
    std::size_t m = p0.alphabet().size();
    if (m > 16)
        throw AlphabetTooLargeError("exhaustive search limited to 16 symbols");
    std::uint32_t best_mask = 0;
    double best_size = 0.0, best_power = -1.0;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        double size = 0.0, power = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (mask & (1u << i)) {
                size += p0.prob(i);
                power += p1.prob(i);
            }
        }
        if (size > alpha + kRatioTieTolerance) continue;
        bool better = power > best_power + kRatioTieTolerance;
        bool tied = std::abs(power - best_power) <= kRatioTieTolerance;
        if (tied && size < best_size - kRatioTieTolerance) better = true;
        if (tied && std::abs(size - best_size) <= kRatioTieTolerance &&
            mask < best_mask)
            better = true;
        if (better) {
            best_mask = mask;
            best_size = size;
            best_power = power;
        }
    }
    BruteForceRegion result;
    for (std::size_t i = 0; i < m; ++i)
        if (best_mask & (1u << i)) result.region.push_back(p0.alphabet().symbol(i));
    result.size = best_size;
    result.power = best_power;
    return result;
}

/// Naive scan for the Fisher p-value; kept independent of testing::p_value.
inline double p_value_oracle(const BehaviorProfile& p0, const std::string& x) {
    std::size_t xi = p0.alphabet().index_of(x);
    double observed = p0.probs()[xi];
    double total = 0.0;
    for (std::size_t i = 0; i < p0.probs().size(); ++i) {
        if (p0.probs()[i] <= observed) total += p0.probs()[i];
    }
    return total;
}

struct CycleFixture {
    HypothesisSet hypotheses;
    std::string event;
};

/// Random search for a 3-hypothesis set whose pairwise NP matrix rejects
/// 0 against 1, 1 against 2, and 2 against 1 on a single event. Profiles are
/// drawn from the k=6 quantized grid over a 3-symbol alphabet; the grid step
/// must stay below alpha or no rejection region fits at all.
inline std::optional<CycleFixture> find_cyclic_rejection(double alpha,
                                                         std::uint64_t seed,
                                                         std::uint64_t attempts) {
    auto alphabet = make_alphabet({"a", "b", "c"});
    constexpr std::uint64_t denom = 64;
    SplitMix64 rng(seed);

    auto random_profile = [&]() {
        // random composition of denom into 3 parts
        std::uint64_t cut1 = rng.next() % (denom + 1);
        std::uint64_t cut2 = rng.next() % (denom + 1);
        if (cut1 > cut2) std::swap(cut1, cut2);
        std::vector<double> probs = {
            static_cast<double>(cut1) / denom,
            static_cast<double>(cut2 - cut1) / denom,
            static_cast<double>(denom - cut2) / denom};
        return BehaviorProfile(alphabet, std::move(probs));
    };

    for (std::uint64_t attempt = 0; attempt < attempts; ++attempt) {
        std::vector<Hypothesis> hs;
        for (int i = 0; i < 3; ++i)
            hs.push_back({std::to_string(i), random_profile(), std::nullopt});
        HypothesisSet hset{hs};
        for (const auto& x : alphabet->symbols()) {
            auto reject = [&](std::size_t i, std::size_t j) {
                try {
                    return np_decide(hset.at(i).profile, hset.at(j).profile,
                                     alpha, x)
                               .decision.verdict == Verdict::Reject;
                } catch (const BothZeroError&) {
                    return false;
                }
            };
            if (reject(0, 1) && reject(1, 2) && reject(2, 1))
                return CycleFixture{hset, x};
        }
    }
    return std::nullopt;
}

/// Fraction of seeded runs in which the MDL null recovers the generating
/// grid member from n simulated events.
inline double mdl_recovery_experiment(const BehaviorProfile& true_profile,
                                      const QuantizedFamily& family,
                                      std::size_t n,
                                      const std::vector<std::uint64_t>& seeds) {
    auto truth = family.grid_coordinates(true_profile);
    if (!truth)
        throw NotInFamilyError("generator profile is not a family member");
    std::size_t recovered = 0;
    for (std::uint64_t seed : seeds) {
        auto stream = simulate_stream({true_profile, n, seed});
        Hypothesis selected = formulate_null(stream.observation, family);
        if (family.grid_coordinates(selected.profile) == truth) ++recovered;
    }
    return static_cast<double>(recovered) / static_cast<double>(seeds.size());
}

} // namespace trustlab

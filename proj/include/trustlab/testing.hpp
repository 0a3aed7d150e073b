#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "trustlab/core.hpp"
#include "trustlab/rng.hpp"

namespace trustlab {

enum class Verdict { Retain, Reject };

struct Decision {
    Verdict verdict = Verdict::Retain;
    /// 1 or 0 for deterministic verdicts; fractional only on the randomized
    /// Neyman-Pearson boundary.
    double rejection_probability = 0.0;

    static Decision reject() { return {Verdict::Reject, 1.0}; }
    static Decision retain() { return {Verdict::Retain, 0.0}; }
};

struct NPThreshold {
    double eta = kInf;            // likelihood-ratio cutoff
    double boundary_gamma = 0.0;  // rejection probability at L == eta
    double achieved_alpha = 0.0;
};

struct TestReport {
    Decision decision;
    double statistic_value = 0.0;  // p-value or likelihood ratio
    double threshold = 0.0;
    double size = 0.0;   // achieved alpha
    double power = 0.0;  // 1 - beta
};

inline void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw AlphaOutOfRangeError("alpha must lie in (0,1)");
}

/// Point rule: reject iff Pr_0(x) < alpha, strictly.
inline Decision point_significance(const BehaviorProfile& p0,
                                   const std::string& x, double alpha) {
    require_alpha(alpha);
    return p0.prob(x) < alpha ? Decision::reject() : Decision::retain();
}

/// Total null probability of all events at least as unlikely as x
/// (inclusive tie comparison).
inline double p_value(const BehaviorProfile& p0, const std::string& x) {
    double px = p0.prob(x);
    double sum = 0.0;
    for (double p : p0.probs())
        if (p <= px) sum += p;
    return sum;
}

/// Fisher significance test: reject iff the p-value is strictly below alpha.
inline TestReport fisher_decide(const BehaviorProfile& p0, const std::string& x,
                                double alpha) {
    require_alpha(alpha);
    double p = p_value(p0, x);
    TestReport report;
    report.decision = p < alpha ? Decision::reject() : Decision::retain();
    report.statistic_value = p;
    report.threshold = alpha;
    double size = 0.0;  // achieved size of "reject iff p-value < alpha"
    for (const auto& y : p0.alphabet().symbols())
        if (p_value(p0, y) < alpha) size += p0.prob(y);
    report.size = size;
    report.power = 0.0;  // no alternative hypothesis in the Fisher setting
    return report;
}

/// L(x) = Pr_1(x) / Pr_0(x); +inf when only the null assigns x probability 0.
inline double likelihood_ratio(const BehaviorProfile& p0,
                               const BehaviorProfile& p1, const std::string& x) {
    require_same_alphabet(p0.alphabet(), p1.alphabet());
    std::size_t i = p0.alphabet().index_of(x);
    double n0 = p0.prob(i), n1 = p1.prob(i);
    if (n0 == 0.0 && n1 == 0.0)
        throw BothZeroError("event '" + x + "' impossible under both hypotheses");
    if (n0 == 0.0) return kInf;
    return n1 / n0;
}

namespace detail {

struct RatioLevel {
    double ratio;      // representative ratio value of the level set
    double null_mass;  // Pr_0 of the level set
    double alt_mass;   // Pr_1 of the level set
};

/// Level sets of the likelihood ratio, sorted by descending ratio. Symbols
/// impossible under both hypotheses carry no mass and are dropped. Ratios are
/// grouped within kRatioTieTolerance.
inline std::vector<RatioLevel> ratio_levels(const BehaviorProfile& p0,
                                            const BehaviorProfile& p1) {
    require_same_alphabet(p0.alphabet(), p1.alphabet());
    std::vector<std::pair<double, std::size_t>> ratios;
    for (std::size_t i = 0; i < p0.probs().size(); ++i) {
        double n0 = p0.prob(i), n1 = p1.prob(i);
        if (n0 == 0.0 && n1 == 0.0) continue;
        ratios.emplace_back(n0 == 0.0 ? kInf : n1 / n0, i);
    }
    std::sort(ratios.begin(), ratios.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<RatioLevel> levels;
    for (const auto& [ratio, i] : ratios) {
        bool tie = !levels.empty() &&
                   (ratio == levels.back().ratio ||
                    std::abs(ratio - levels.back().ratio) <= kRatioTieTolerance);
        if (!tie) levels.push_back({ratio, 0.0, 0.0});
        levels.back().null_mass += p0.prob(i);
        levels.back().alt_mass += p1.prob(i);
    }
    return levels;
}

} // namespace detail

/// Solves for the likelihood-ratio cutoff. Deterministic variant: the
/// smallest attained ratio value eta with Pr_0(L > eta) <= alpha, gamma = 0.
/// Randomized variant: additionally gamma such that
/// Pr_0(L > eta) + gamma * Pr_0(L == eta) == alpha exactly.
inline NPThreshold np_threshold(const BehaviorProfile& p0,
                                const BehaviorProfile& p1, double alpha,
                                bool randomized = false) {
    require_alpha(alpha);
    auto levels = detail::ratio_levels(p0, p1);
    NPThreshold t;
    double above = 0.0;  // Pr_0(L > candidate eta)
    std::size_t chosen = 0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        double prefix = 0.0;
        for (std::size_t j = 0; j < k; ++j) prefix += levels[j].null_mass;
        if (prefix <= alpha) {
            chosen = k;
            above = prefix;
        } else {
            break;
        }
    }
    t.eta = levels.empty() ? kInf : levels[chosen].ratio;
    t.achieved_alpha = above;
    if (randomized) {
        double boundary_mass = levels.empty() ? 0.0 : levels[chosen].null_mass;
        if (boundary_mass > 0.0) {
            t.boundary_gamma = (alpha - above) / boundary_mass;
            t.boundary_gamma = std::clamp(t.boundary_gamma, 0.0, 1.0);
            t.achieved_alpha = above + t.boundary_gamma * boundary_mass;
        }
    }
    return t;
}

/// Size and power of an arbitrary (possibly randomized) rejection region.
inline std::pair<double, double> test_size_and_power(
    const BehaviorProfile& p0, const BehaviorProfile& p1,
    const std::vector<double>& rejection) {
    require_same_alphabet(p0.alphabet(), p1.alphabet());
    if (rejection.size() != p0.probs().size())
        throw AlphabetMismatchError("rejection vector does not cover alphabet");
    double size = 0.0, power = 0.0;
    for (std::size_t i = 0; i < rejection.size(); ++i) {
        double r = rejection[i];
        if (!(r >= 0.0 && r <= 1.0))
            throw OutOfRangeError("rejection probability outside [0,1]");
        size += r * p0.prob(i);
        power += r * p1.prob(i);
    }
    return {size, power};
}

namespace detail {

inline bool at_boundary(double ratio, double eta) {
    if (ratio == eta) return true;
    if (std::isinf(ratio) || std::isinf(eta)) return false;
    return std::abs(ratio - eta) <= kRatioTieTolerance;
}

/// Exact size and power of the NP test described by a threshold.
inline std::pair<double, double> np_size_and_power(const BehaviorProfile& p0,
                                                   const BehaviorProfile& p1,
                                                   const NPThreshold& t) {
    auto levels = ratio_levels(p0, p1);
    double size = 0.0, power = 0.0;
    for (const auto& level : levels) {
        if (at_boundary(level.ratio, t.eta)) {
            size += t.boundary_gamma * level.null_mass;
            power += t.boundary_gamma * level.alt_mass;
        } else if (level.ratio > t.eta) {
            size += level.null_mass;
            power += level.alt_mass;
        }
    }
    return {size, power};
}

} // namespace detail

/// Exact size and power of the NP test at a given threshold, by summation
/// over ratio level sets.
inline std::pair<double, double> np_size_and_power(const BehaviorProfile& p0,
                                                   const BehaviorProfile& p1,
                                                   const NPThreshold& t) {
    return detail::np_size_and_power(p0, p1, t);
}

/// Neyman-Pearson decision on a single observed event. Deterministic: reject
/// iff L(x) > eta; ties at eta retain. Randomized: reject with probability
/// boundary_gamma at the boundary, driven by the seeded generator.
inline TestReport np_decide(const BehaviorProfile& p0, const BehaviorProfile& p1,
                            double alpha, const std::string& x,
                            bool randomized = false,
                            std::optional<std::uint64_t> seed = std::nullopt) {
    NPThreshold t = np_threshold(p0, p1, alpha, randomized);
    double ratio = likelihood_ratio(p0, p1, x);

    TestReport report;
    report.statistic_value = ratio;
    report.threshold = t.eta;
    auto [size, power] = detail::np_size_and_power(p0, p1, t);
    report.size = size;
    report.power = power;

    if (randomized && detail::at_boundary(ratio, t.eta)) {
        if (!seed)
            throw MissingSeedError("randomized test at the boundary requires a seed");
        SplitMix64 rng(*seed);
        bool reject = rng.next_double() < t.boundary_gamma;
        report.decision = {reject ? Verdict::Reject : Verdict::Retain,
                           t.boundary_gamma};
    } else {
        report.decision =
            ratio > t.eta && !detail::at_boundary(ratio, t.eta)
                ? Decision::reject()
                : Decision::retain();
    }
    return report;
}

/// Decision matrix over ordered hypothesis pairs: entry (i,j) tests null i
/// against alternative j. Exposes non-transitive rejection patterns.
inline std::vector<std::vector<Decision>> pairwise_np_matrix(
    const HypothesisSet& hset, double alpha, const std::string& x,
    bool randomized = false, std::optional<std::uint64_t> seed = std::nullopt) {
    if (hset.size() < 2)
        throw Error("pairwise matrix needs at least two hypotheses");
    std::size_t n = hset.size();
    std::vector<std::vector<Decision>> matrix(n, std::vector<Decision>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            // a hypothesis never rejects against itself (L == 1 everywhere)
            matrix[i][j] = i == j ? Decision::retain()
                                  : np_decide(hset.at(i).profile,
                                              hset.at(j).profile, alpha, x,
                                              randomized, seed)
                                        .decision;
        }
    }
    return matrix;
}

} // namespace trustlab

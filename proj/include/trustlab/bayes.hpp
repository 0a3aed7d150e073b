#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "trustlab/core.hpp"

namespace trustlab {

/// Posterior over a hypothesis set. The contained set carries the posterior
/// weights in place of the priors; indices and ids match the input set.
/// Evidence is kept in log2 form so long streams do not underflow.
struct Posterior {
    HypothesisSet hypotheses;
    double log2_evidence = 0.0;

    double weight(std::size_t i) const { return *hypotheses.at(i).prior; }
    double evidence() const { return std::exp2(log2_evidence); }
};

namespace detail {

/// Normalizes log2 weights into a Posterior. Throws ZeroEvidence when every
/// hypothesis has weight zero.
inline Posterior normalize_log_weights(const HypothesisSet& hset,
                                       const std::vector<double>& log2_weights) {
    double max_log = -kInf;
    for (double lw : log2_weights) max_log = std::max(max_log, lw);
    if (max_log == -kInf)
        throw ZeroEvidenceError("data impossible under every weighted hypothesis");

    double scaled_sum = 0.0;
    std::vector<double> scaled(log2_weights.size());
    for (std::size_t i = 0; i < log2_weights.size(); ++i) {
        scaled[i] = std::exp2(log2_weights[i] - max_log);
        scaled_sum += scaled[i];
    }

    std::vector<Hypothesis> result;
    result.reserve(hset.size());
    for (std::size_t i = 0; i < hset.size(); ++i) {
        Hypothesis h = hset.at(i);
        h.prior = scaled[i] / scaled_sum;
        result.push_back(std::move(h));
    }
    return Posterior{HypothesisSet(std::move(result)),
                     max_log + std::log2(scaled_sum)};
}

inline void require_priors(const HypothesisSet& hset) {
    if (!hset.has_priors())
        throw MissingPriorsError("hypothesis set carries no priors");
}

} // namespace detail

/// Posterior after a batch of observed counts, computed in log space with a
/// single normalization.
inline Posterior batch_posterior(const HypothesisSet& hset, const Observation& obs) {
    detail::require_priors(hset);
    require_same_alphabet(hset.alphabet(), obs.alphabet());
    std::vector<double> log2_weights(hset.size());
    for (std::size_t i = 0; i < hset.size(); ++i) {
        const Hypothesis& h = hset.at(i);
        double lp = *h.prior > 0.0 ? std::log2(*h.prior) : -kInf;
        log2_weights[i] = lp + log_likelihood(h.profile, obs);
    }
    return detail::normalize_log_weights(hset, log2_weights);
}

/// Bayes update on a single observed event.
inline Posterior posterior(const HypothesisSet& hset, const std::string& x) {
    return batch_posterior(hset, Observation::single_event(hset.alphabet_ptr(), x));
}

/// Folds the Bayes update over an event stream; log-space accumulation with
/// one normalization at the end.
inline Posterior sequential_update(const HypothesisSet& hset,
                                   const std::vector<std::string>& stream) {
    detail::require_priors(hset);
    std::vector<double> log2_weights(hset.size());
    for (std::size_t i = 0; i < hset.size(); ++i) {
        double p = *hset.at(i).prior;
        log2_weights[i] = p > 0.0 ? std::log2(p) : -kInf;
    }
    for (const auto& x : stream) {
        std::size_t idx = hset.alphabet().index_of(x);
        for (std::size_t i = 0; i < hset.size(); ++i) {
            double p = hset.at(i).profile.prob(idx);
            log2_weights[i] += p > 0.0 ? std::log2(p) : -kInf;
        }
    }
    return detail::normalize_log_weights(hset, log2_weights);
}

/// Hypothesis with the greatest posterior weight; ties break by declaration
/// order, first wins.
inline const Hypothesis& map_hypothesis(const Posterior& p) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.hypotheses.size(); ++i)
        if (p.weight(i) > p.weight(best)) best = i;
    return p.hypotheses.at(best);
}

/// Prior predictive mixture over the hypothesis set.
inline BehaviorProfile predictive(const HypothesisSet& hset) {
    detail::require_priors(hset);
    std::vector<double> probs(hset.alphabet().size(), 0.0);
    for (const auto& h : hset.hypotheses())
        for (std::size_t i = 0; i < probs.size(); ++i)
            probs[i] += *h.prior * h.profile.prob(i);
    return BehaviorProfile(hset.alphabet_ptr(), std::move(probs));
}

} // namespace trustlab

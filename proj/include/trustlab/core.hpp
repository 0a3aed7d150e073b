#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "trustlab/errors.hpp"

namespace trustlab {

/// Absolute tolerance on probability sums (profiles, priors, posteriors).
inline constexpr double kSumTolerance = 1e-9;

/// Tolerance used to group likelihood-ratio level sets.
inline constexpr double kRatioTieTolerance = 1e-12;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// The finite set of observable behaviors. Iteration order is declaration
/// order and is stable; labels are opaque strings.
class BehaviorAlphabet {
public:
    explicit BehaviorAlphabet(std::vector<std::string> symbols)
        : symbols_(std::move(symbols)) {
        if (symbols_.empty())
            throw Error("alphabet must be nonempty");
        for (std::size_t i = 0; i < symbols_.size(); ++i) {
            auto [it, inserted] = index_.emplace(symbols_[i], i);
            if (!inserted)
                throw Error("duplicate symbol '" + symbols_[i] + "'");
        }
    }

    std::size_t size() const { return symbols_.size(); }
    const std::vector<std::string>& symbols() const { return symbols_; }
    const std::string& symbol(std::size_t i) const { return symbols_.at(i); }

    std::size_t index_of(const std::string& symbol) const {
        auto it = index_.find(symbol);
        if (it == index_.end())
            throw UnknownSymbolError("unknown symbol '" + symbol + "'");
        return it->second;
    }

    bool contains(const std::string& symbol) const {
        return index_.count(symbol) != 0;
    }

    friend bool operator==(const BehaviorAlphabet& a, const BehaviorAlphabet& b) {
        return a.symbols_ == b.symbols_;
    }

private:
    std::vector<std::string> symbols_;
    std::unordered_map<std::string, std::size_t> index_;
};

using AlphabetPtr = std::shared_ptr<const BehaviorAlphabet>;

inline AlphabetPtr make_alphabet(std::vector<std::string> symbols) {
    return std::make_shared<const BehaviorAlphabet>(std::move(symbols));
}

inline void require_same_alphabet(const BehaviorAlphabet& a,
                                  const BehaviorAlphabet& b) {
    if (!(a == b))
        throw AlphabetMismatchError("alphabets differ");
}

/// A trust hypothesis's content: a probability distribution over the alphabet.
class BehaviorProfile {
public:
    BehaviorProfile(AlphabetPtr alphabet, std::vector<double> probs)
        : alphabet_(std::move(alphabet)), probs_(std::move(probs)) {
        if (probs_.size() != alphabet_->size())
            throw MissingSymbolError("probability vector does not cover alphabet");
        double sum = 0.0;
        for (std::size_t i = 0; i < probs_.size(); ++i) {
            double p = probs_[i];
            if (!(p >= 0.0 && p <= 1.0))
                throw OutOfRangeError("probability of '" + alphabet_->symbol(i) +
                                      "' outside [0,1]");
            sum += p;
        }
        if (std::abs(sum - 1.0) > kSumTolerance)
            throw NonUnitSumError("probabilities sum to " + std::to_string(sum));
    }

    const BehaviorAlphabet& alphabet() const { return *alphabet_; }
    const AlphabetPtr& alphabet_ptr() const { return alphabet_; }
    const std::vector<double>& probs() const { return probs_; }

    double prob(std::size_t i) const { return probs_.at(i); }
    double prob(const std::string& symbol) const {
        return probs_[alphabet_->index_of(symbol)];
    }

private:
    AlphabetPtr alphabet_;
    std::vector<double> probs_;
};

/// Counts of observed events per behavior. A "single event" observation has
/// total() == 1.
class Observation {
public:
    Observation(AlphabetPtr alphabet, std::vector<std::uint64_t> counts)
        : alphabet_(std::move(alphabet)), counts_(std::move(counts)) {
        if (counts_.size() != alphabet_->size())
            throw MissingSymbolError("count vector does not cover alphabet");
        total_ = 0;
        for (auto c : counts_) total_ += c;
    }

    static Observation single_event(AlphabetPtr alphabet, const std::string& symbol) {
        std::vector<std::uint64_t> counts(alphabet->size(), 0);
        counts[alphabet->index_of(symbol)] = 1;
        return Observation(std::move(alphabet), std::move(counts));
    }

    const BehaviorAlphabet& alphabet() const { return *alphabet_; }
    const AlphabetPtr& alphabet_ptr() const { return alphabet_; }
    const std::vector<std::uint64_t>& counts() const { return counts_; }
    std::uint64_t count(std::size_t i) const { return counts_.at(i); }
    std::uint64_t total() const { return total_; }

    /// Count-wise sum of two observations over the same alphabet.
    Observation operator+(const Observation& other) const {
        require_same_alphabet(*alphabet_, other.alphabet());
        std::vector<std::uint64_t> counts(counts_);
        for (std::size_t i = 0; i < counts.size(); ++i)
            counts[i] += other.counts_[i];
        return Observation(alphabet_, std::move(counts));
    }

private:
    AlphabetPtr alphabet_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

struct Hypothesis {
    std::string id;
    BehaviorProfile profile;
    std::optional<double> prior;
};

/// Indexed hypotheses over a shared alphabet. Priors are all-or-none and,
/// when present, sum to 1 within kSumTolerance.
class HypothesisSet {
public:
    explicit HypothesisSet(std::vector<Hypothesis> hypotheses)
        : hypotheses_(std::move(hypotheses)) {
        if (hypotheses_.empty())
            throw Error("hypothesis set must be nonempty");
        const BehaviorAlphabet& alphabet = hypotheses_.front().profile.alphabet();
        std::size_t with_prior = 0;
        double prior_sum = 0.0;
        std::unordered_map<std::string, int> seen;
        for (const auto& h : hypotheses_) {
            require_same_alphabet(alphabet, h.profile.alphabet());
            if (++seen[h.id] > 1)
                throw Error("duplicate hypothesis id '" + h.id + "'");
            if (h.prior) {
                if (!(*h.prior >= 0.0 && *h.prior <= 1.0))
                    throw OutOfRangeError("prior of '" + h.id + "' outside [0,1]");
                ++with_prior;
                prior_sum += *h.prior;
            }
        }
        if (with_prior != 0 && with_prior != hypotheses_.size())
            throw MissingPriorsError("priors must be present on all hypotheses or none");
        if (with_prior != 0 && std::abs(prior_sum - 1.0) > kSumTolerance)
            throw NonUnitSumError("priors sum to " + std::to_string(prior_sum));
    }

    std::size_t size() const { return hypotheses_.size(); }
    const std::vector<Hypothesis>& hypotheses() const { return hypotheses_; }
    const Hypothesis& at(std::size_t i) const { return hypotheses_.at(i); }
    const BehaviorAlphabet& alphabet() const {
        return hypotheses_.front().profile.alphabet();
    }
    const AlphabetPtr& alphabet_ptr() const {
        return hypotheses_.front().profile.alphabet_ptr();
    }
    bool has_priors() const { return hypotheses_.front().prior.has_value(); }

private:
    std::vector<Hypothesis> hypotheses_;
};

/// Builds a profile from symbol-keyed raw numbers, enforcing the profile
/// invariants. Raw keys must match the alphabet exactly.
inline BehaviorProfile validate_profile(const std::map<std::string, double>& raw,
                                        AlphabetPtr alphabet) {
    if (raw.size() != alphabet->size())
        throw MissingSymbolError("raw map does not cover alphabet");
    std::vector<double> probs(alphabet->size());
    for (const auto& [symbol, p] : raw) {
        if (!alphabet->contains(symbol))
            throw MissingSymbolError("symbol '" + symbol + "' not in alphabet");
        probs[alphabet->index_of(symbol)] = p;
    }
    return BehaviorProfile(std::move(alphabet), std::move(probs));
}

/// Frequency distribution of a nonempty observation.
inline BehaviorProfile empirical_profile(const Observation& obs) {
    if (obs.total() == 0)
        throw EmptyObservationError("cannot take frequencies of an empty observation");
    std::vector<double> probs(obs.alphabet().size());
    double total = static_cast<double>(obs.total());
    for (std::size_t i = 0; i < probs.size(); ++i)
        probs[i] = static_cast<double>(obs.count(i)) / total;
    return BehaviorProfile(obs.alphabet_ptr(), std::move(probs));
}

/// Base-2 log-likelihood of the observed counts under the profile.
/// 0*log(0) is 0; returns -inf when a positive count falls on a
/// zero-probability symbol; returns 0 for an all-zero observation.
inline double log_likelihood(const BehaviorProfile& profile, const Observation& obs) {
    require_same_alphabet(profile.alphabet(), obs.alphabet());
    double sum = 0.0;
    for (std::size_t i = 0; i < profile.probs().size(); ++i) {
        std::uint64_t c = obs.count(i);
        if (c == 0) continue;
        double p = profile.prob(i);
        if (p == 0.0) return -kInf;
        sum += static_cast<double>(c) * std::log2(p);
    }
    return sum;
}

} // namespace trustlab

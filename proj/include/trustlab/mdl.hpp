#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "trustlab/core.hpp"

namespace trustlab {

/// A description length in bits. +inf encodes data impossible under the
/// hypothesis.
struct CodeLength {
    double bits = 0.0;
};

/// The enumerable hypothesis grid: all profiles whose probabilities are
/// integer multiples of 2^-k, with a uniform prior over the family.
class QuantizedFamily {
public:
    QuantizedFamily(AlphabetPtr alphabet, unsigned resolution)
        : alphabet_(std::move(alphabet)), resolution_(resolution) {
        if (resolution_ == 0)
            throw OutOfRangeError("grid resolution must be positive");
    }

    const BehaviorAlphabet& alphabet() const { return *alphabet_; }
    const AlphabetPtr& alphabet_ptr() const { return alphabet_; }
    unsigned resolution() const { return resolution_; }
    std::uint64_t denominator() const { return 1ULL << resolution_; }

    /// Stars-and-bars count C(2^k + |B| - 1, |B| - 1); saturates at
    /// kCountSaturated on overflow.
    static constexpr std::uint64_t kCountSaturated = UINT64_MAX;
    std::uint64_t size() const {
        std::uint64_t n = denominator() + alphabet_->size() - 1;
        std::uint64_t r = alphabet_->size() - 1;
        // C(n, r) by incremental multiply/divide; exact at every step.
        unsigned __int128 acc = 1;
        for (std::uint64_t i = 1; i <= r; ++i) {
            acc = acc * (n - r + i) / i;
            if (acc > static_cast<unsigned __int128>(UINT64_MAX))
                return kCountSaturated;
        }
        return static_cast<std::uint64_t>(acc);
    }

    /// Numerators of a family member's probabilities, or nullopt when the
    /// profile is off the grid.
    std::optional<std::vector<std::uint64_t>> grid_coordinates(
        const BehaviorProfile& profile) const {
        if (!(profile.alphabet() == *alphabet_)) return std::nullopt;
        double denom = static_cast<double>(denominator());
        std::vector<std::uint64_t> numerators(profile.probs().size());
        std::uint64_t sum = 0;
        for (std::size_t i = 0; i < numerators.size(); ++i) {
            double scaled = profile.prob(i) * denom;
            double rounded = std::round(scaled);
            if (std::abs(scaled - rounded) > denom * kSumTolerance)
                return std::nullopt;
            numerators[i] = static_cast<std::uint64_t>(rounded);
            sum += numerators[i];
        }
        if (sum != denominator()) return std::nullopt;
        return numerators;
    }

    bool contains(const BehaviorProfile& profile) const {
        return grid_coordinates(profile).has_value();
    }

    BehaviorProfile member(const std::vector<std::uint64_t>& numerators) const {
        std::vector<double> probs(numerators.size());
        double denom = static_cast<double>(denominator());
        for (std::size_t i = 0; i < numerators.size(); ++i)
            probs[i] = static_cast<double>(numerators[i]) / denom;
        return BehaviorProfile(alphabet_, std::move(probs));
    }

    /// Rounds an arbitrary profile to the nearest grid member (largest
    /// remainders fix the sum).
    BehaviorProfile round_to_grid(const BehaviorProfile& profile) const {
        require_same_alphabet(profile.alphabet(), *alphabet_);
        std::uint64_t denom = denominator();
        std::vector<std::uint64_t> numerators(profile.probs().size());
        std::vector<std::pair<double, std::size_t>> remainders;
        std::uint64_t sum = 0;
        for (std::size_t i = 0; i < numerators.size(); ++i) {
            double scaled = profile.prob(i) * static_cast<double>(denom);
            numerators[i] = static_cast<std::uint64_t>(std::floor(scaled));
            remainders.push_back({scaled - std::floor(scaled), i});
            sum += numerators[i];
        }
        std::sort(remainders.begin(), remainders.end(),
                  [](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first > b.first;
                      return a.second < b.second;
                  });
        for (std::size_t j = 0; sum < denom; ++j, ++sum)
            ++numerators[remainders[j].second];
        return member(numerators);
    }

    /// Visits every member in lexicographic order of the numerator vector.
    /// The visitor receives the numerators; return false to stop early.
    void for_each_member(
        const std::function<bool(const std::vector<std::uint64_t>&)>& visit) const {
        std::vector<std::uint64_t> numerators(alphabet_->size(), 0);
        enumerate(numerators, 0, denominator(), visit);
    }

private:
    bool enumerate(std::vector<std::uint64_t>& numerators, std::size_t pos,
                   std::uint64_t remaining,
                   const std::function<bool(const std::vector<std::uint64_t>&)>&
                       visit) const {
        if (pos + 1 == numerators.size()) {
            numerators[pos] = remaining;
            return visit(numerators);
        }
        for (std::uint64_t v = 0; v <= remaining; ++v) {
            numerators[pos] = v;
            if (!enumerate(numerators, pos + 1, remaining - v, visit))
                return false;
        }
        return true;
    }

    AlphabetPtr alphabet_;
    unsigned resolution_;
};

/// Data term of the two-part code: -log2 likelihood of the counts.
inline CodeLength data_code_length(const BehaviorProfile& profile,
                                   const Observation& obs) {
    return CodeLength{-log_likelihood(profile, obs)};
}

/// Hypothesis term: index cost under the uniform family prior, log2 of the
/// family size, constant across members.
inline CodeLength hypothesis_code_length(const QuantizedFamily& family,
                                         const Hypothesis& h) {
    if (!family.contains(h.profile))
        throw NotInFamilyError("hypothesis '" + h.id + "' is not a family member");
    std::uint64_t n = family.size();
    if (n == QuantizedFamily::kCountSaturated)
        throw FamilyTooLargeError("family size overflows the exact counter");
    return CodeLength{std::log2(static_cast<double>(n))};
}

inline CodeLength two_part_length(const QuantizedFamily& family,
                                  const Hypothesis& h, const Observation& obs) {
    return CodeLength{hypothesis_code_length(family, h).bits +
                      data_code_length(h.profile, obs).bits};
}

inline constexpr std::uint64_t kDefaultFamilyBound = 10'000'000;

/// Shortest-two-part-code member of the family. With the uniform family
/// prior this is the maximum-likelihood grid member; ties break
/// lexicographically on the numerator vector (first in enumeration order).
inline Hypothesis mdl_select(const QuantizedFamily& family, const Observation& obs,
                             std::uint64_t family_bound = kDefaultFamilyBound) {
    if (obs.total() == 0)
        throw EmptyObservationError("cannot select a hypothesis from no data");
    require_same_alphabet(family.alphabet(), obs.alphabet());
    std::uint64_t family_size = family.size();
    if (family_size > family_bound)
        throw FamilyTooLargeError("family has " + std::to_string(family_size) +
                                  " members, bound is " +
                                  std::to_string(family_bound));

    // log2(i / 2^k) per numerator, shared across members.
    std::uint64_t denom = family.denominator();
    std::vector<double> log_table(denom + 1);
    log_table[0] = -kInf;
    for (std::uint64_t i = 1; i <= denom; ++i)
        log_table[i] = std::log2(static_cast<double>(i) /
                                 static_cast<double>(denom));

    const auto& counts = obs.counts();
    double best_bits = kInf;
    std::vector<std::uint64_t> best;
    family.for_each_member([&](const std::vector<std::uint64_t>& numerators) {
        double bits = 0.0;
        for (std::size_t i = 0; i < numerators.size(); ++i) {
            if (counts[i] == 0) continue;
            if (numerators[i] == 0) return true;  // impossible data, skip
            bits -= static_cast<double>(counts[i]) * log_table[numerators[i]];
        }
        if (bits < best_bits) {  // strict: keeps the lexicographically first
            best_bits = bits;
            best = numerators;
        }
        return true;
    });
    if (best.empty())
        throw ZeroEvidenceError("no family member can encode the observation");
    return Hypothesis{"mdl", family.member(best), std::nullopt};
}

/// A-priori trustworthy-baseline hypothesis: the MDL selection over a
/// baseline observation, tagged as the null for downstream tests.
inline Hypothesis formulate_null(const Observation& obs, const QuantizedFamily& family,
                                 std::uint64_t family_bound = kDefaultFamilyBound) {
    Hypothesis h = mdl_select(family, obs, family_bound);
    h.id = "null/trustworthy";
    return h;
}

/// LZ78 dictionary coder. Each phrase emits a dictionary index over the
/// dict_size + 1 possible values at Shannon cost log2(dict_size + 1) bits,
/// plus one literal at log2(|B|) bits. An empty stream costs 0 bits (no
/// header).
inline double lz78_bits(const std::vector<std::string>& events,
                        const BehaviorAlphabet& alphabet) {
    double symbol_bits = std::log2(static_cast<double>(alphabet.size()));

    // Trie keyed on (node, symbol index).
    std::unordered_map<std::uint64_t, std::uint64_t> children;
    std::uint64_t next_id = 1;  // 0 is the root / empty phrase
    double total_bits = 0.0;
    std::uint64_t node = 0;
    auto key = [&](std::uint64_t n, std::size_t sym) {
        return n * alphabet.size() + sym;
    };
    for (const auto& event : events) {
        std::size_t sym = alphabet.index_of(event);
        auto it = children.find(key(node, sym));
        if (it != children.end()) {
            node = it->second;
            continue;
        }
        total_bits += std::log2(static_cast<double>(next_id)) + symbol_bits;
        children[key(node, sym)] = next_id++;
        node = 0;
    }
    if (node != 0) {
        // trailing partial phrase: emit its index with no literal
        total_bits += std::log2(static_cast<double>(next_id));
    }
    return total_bits;
}

/// Length estimate of the serialized stream under a named compressor.
/// Built-in method: "lz78". The serialization must realize exactly the
/// observation's counts.
inline CodeLength compressor_length_estimate(const Observation& obs,
                                             const std::vector<std::string>& events,
                                             const std::string& method = "lz78") {
    std::vector<std::uint64_t> counts(obs.alphabet().size(), 0);
    for (const auto& event : events)
        ++counts[obs.alphabet().index_of(event)];
    if (counts != obs.counts())
        throw SerializationMismatchError(
            "serialized stream does not match the observation counts");
    if (method == "lz78")
        return CodeLength{lz78_bits(events, obs.alphabet())};
    throw UnknownMethodError("unknown compressor '" + method + "'");
}

} // namespace trustlab

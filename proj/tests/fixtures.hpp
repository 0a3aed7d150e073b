#pragma once

// The canonical four-behavior example used throughout the tests: a system
// that mostly behaves (a), occasionally blocks (b), crashes (c), or delays
// (d), against an untrustworthy alternative that delays most of the time.

#include "trustlab/core.hpp"

namespace fixtures {

inline trustlab::AlphabetPtr abcd() {
    static trustlab::AlphabetPtr alphabet =
        trustlab::make_alphabet({"a", "b", "c", "d"});
    return alphabet;
}

inline trustlab::BehaviorProfile trustworthy() {
    return {abcd(), {0.98, 0.005, 0.005, 0.01}};
}

inline trustlab::BehaviorProfile untrustworthy() {
    return {abcd(), {0.098, 0.001, 0.001, 0.9}};
}

inline trustlab::AlphabetPtr coin() {
    static trustlab::AlphabetPtr alphabet = trustlab::make_alphabet({"h", "t"});
    return alphabet;
}

inline trustlab::BehaviorProfile fair_coin() { return {coin(), {0.5, 0.5}}; }

} // namespace fixtures

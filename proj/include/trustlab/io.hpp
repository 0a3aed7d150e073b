#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "trustlab/bayes.hpp"
#include "trustlab/core.hpp"
#include "trustlab/testing.hpp"

namespace trustlab::io {

using nlohmann::json;

inline json parse_json(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw ParseError("malformed JSON in " + what);
    return j;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open '" + path + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline AlphabetPtr alphabet_from_json(const json& j) {
    if (!j.is_array() || j.empty())
        throw ParseError("\"alphabet\" must be a nonempty array of symbols");
    std::vector<std::string> symbols;
    for (const auto& s : j) {
        if (!s.is_string())
            throw ParseError("alphabet symbols must be strings");
        symbols.push_back(s.get<std::string>());
    }
    try {
        return make_alphabet(std::move(symbols));
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
}

inline BehaviorProfile probs_from_json(const json& j, AlphabetPtr alphabet) {
    if (!j.is_object())
        throw ParseError("\"probs\" must be an object of symbol: number");
    std::map<std::string, double> raw;
    for (const auto& [symbol, value] : j.items()) {
        if (!alphabet->contains(symbol))
            throw ParseError("unknown symbol '" + symbol + "' in probs");
        if (!value.is_number())
            throw ParseError("probability of '" + symbol + "' must be a number");
        raw[symbol] = value.get<double>();
    }
    return validate_profile(raw, std::move(alphabet));
}

/// Profile file: {"alphabet": [symbols...], "probs": {symbol: number}}.
inline BehaviorProfile load_profile(const std::string& path) {
    json j = parse_json(read_file(path), path);
    if (!j.contains("alphabet") || !j.contains("probs"))
        throw ParseError(path + ": profile needs \"alphabet\" and \"probs\"");
    return probs_from_json(j["probs"], alphabet_from_json(j["alphabet"]));
}

inline json profile_to_json(const BehaviorProfile& profile) {
    json probs = json::object();
    for (std::size_t i = 0; i < profile.probs().size(); ++i)
        probs[profile.alphabet().symbol(i)] = profile.prob(i);
    return json{{"alphabet", profile.alphabet().symbols()}, {"probs", probs}};
}

/// Hypothesis-set file: {"alphabet": [...], "hypotheses":
/// [{"id": str, "prior": number?, "probs": {...}}, ...]}.
inline HypothesisSet load_hypothesis_set(const std::string& path) {
    json j = parse_json(read_file(path), path);
    if (!j.contains("alphabet") || !j.contains("hypotheses"))
        throw ParseError(path + ": needs \"alphabet\" and \"hypotheses\"");
    AlphabetPtr alphabet = alphabet_from_json(j["alphabet"]);
    if (!j["hypotheses"].is_array() || j["hypotheses"].empty())
        throw ParseError(path + ": \"hypotheses\" must be a nonempty array");
    std::vector<Hypothesis> hypotheses;
    for (const auto& h : j["hypotheses"]) {
        if (!h.contains("id") || !h.contains("probs"))
            throw ParseError(path + ": each hypothesis needs \"id\" and \"probs\"");
        std::optional<double> prior;
        if (h.contains("prior")) prior = h["prior"].get<double>();
        hypotheses.push_back(
            {h["id"].get<std::string>(), probs_from_json(h["probs"], alphabet), prior});
    }
    try {
        return HypothesisSet(std::move(hypotheses));
    } catch (const Error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline json hypothesis_set_to_json(const HypothesisSet& hset) {
    json hypotheses = json::array();
    for (const auto& h : hset.hypotheses()) {
        json entry = {{"id", h.id}, {"probs", profile_to_json(h.profile)["probs"]}};
        if (h.prior) entry["prior"] = *h.prior;
        hypotheses.push_back(entry);
    }
    return json{{"alphabet", hset.alphabet().symbols()}, {"hypotheses", hypotheses}};
}

/// Event stream: newline-delimited symbol labels, or a JSON counts object
/// {symbol: count}. Unknown symbols are rejected.
inline std::vector<std::string> load_stream(const std::string& path,
                                            const BehaviorAlphabet& alphabet) {
    std::string text = read_file(path);
    std::size_t start = text.find_first_not_of(" \t\r\n");
    std::vector<std::string> events;
    if (start != std::string::npos && text[start] == '{') {
        json j = parse_json(text, path);
        for (const auto& [symbol, value] : j.items()) {
            if (!alphabet.contains(symbol))
                throw ParseError("unknown symbol '" + symbol + "' in " + path);
            if (!value.is_number_unsigned())
                throw ParseError("count of '" + symbol + "' must be a nonnegative integer");
            for (std::uint64_t c = value.get<std::uint64_t>(); c > 0; --c)
                events.push_back(symbol);
        }
        return events;
    }
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!alphabet.contains(line))
            throw ParseError("unknown symbol '" + line + "' in " + path);
        events.push_back(line);
    }
    return events;
}

inline Observation observation_from_events(const std::vector<std::string>& events,
                                           AlphabetPtr alphabet) {
    std::vector<std::uint64_t> counts(alphabet->size(), 0);
    for (const auto& event : events)
        ++counts[alphabet->index_of(event)];
    return Observation(std::move(alphabet), std::move(counts));
}

inline const char* verdict_name(Verdict v) {
    return v == Verdict::Reject ? "reject" : "retain";
}

inline Verdict verdict_from_name(const std::string& name) {
    if (name == "reject") return Verdict::Reject;
    if (name == "retain") return Verdict::Retain;
    throw ParseError("unknown verdict '" + name + "'");
}

inline json report_to_json(const TestReport& report) {
    return json{{"verdict", verdict_name(report.decision.verdict)},
                {"statistic", report.statistic_value},
                {"threshold", report.threshold},
                {"size", report.size},
                {"power", report.power}};
}

inline TestReport report_from_json(const json& j) {
    TestReport report;
    report.decision.verdict = verdict_from_name(j.at("verdict").get<std::string>());
    report.decision.rejection_probability =
        report.decision.verdict == Verdict::Reject ? 1.0 : 0.0;
    // nlohmann/json serializes infinities as null
    auto number = [](const json& v) {
        return v.is_null() ? kInf : v.get<double>();
    };
    report.statistic_value = number(j.at("statistic"));
    report.threshold = number(j.at("threshold"));
    report.size = j.at("size").get<double>();
    report.power = j.at("power").get<double>();
    return report;
}

} // namespace trustlab::io

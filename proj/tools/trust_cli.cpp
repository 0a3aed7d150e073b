// trust: statistical trust decisions on behavior profiles.
//
// Exit codes: 0 retain/success, 1 reject, 2 usage or input error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trustlab/bayes.hpp"
#include "trustlab/core.hpp"
#include "trustlab/harness.hpp"
#include "trustlab/io.hpp"
#include "trustlab/mdl.hpp"
#include "trustlab/testing.hpp"

namespace {

using nlohmann::json;
using namespace trustlab;

constexpr int kExitRetain = 0;
constexpr int kExitReject = 1;
constexpr int kExitError = 2;

struct CommonOptions {
    double alpha = 0.01;
    std::string variant = "deterministic";
    unsigned k = 8;
    std::optional<std::uint64_t> seed;
    std::string output = "text";
};

bool randomized(const CommonOptions& opts) { return opts.variant == "randomized"; }

void emit(const CommonOptions& opts, const json& j, const std::string& text) {
    if (opts.output == "json")
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

std::string single_event(const std::string& event, const std::string& stream_path,
                         const BehaviorAlphabet& alphabet) {
    if (!event.empty() && !stream_path.empty())
        throw ParseError("give either --event or --stream, not both");
    if (!event.empty()) {
        if (!alphabet.contains(event))
            throw UnknownSymbolError("unknown symbol '" + event + "'");
        return event;
    }
    if (stream_path.empty())
        throw ParseError("an observed event is required (--event or --stream)");
    auto events = io::load_stream(stream_path, alphabet);
    if (events.size() != 1)
        throw ParseError("single-event tests need a stream of exactly one event, got " +
                         std::to_string(events.size()));
    return events.front();
}

int run_test(const std::string& kind, const std::vector<std::string>& profiles,
             const std::string& event, const std::string& stream_path,
             const CommonOptions& opts) {
    TestReport report;
    if (kind == "np") {
        if (profiles.size() != 2)
            throw ParseError("np test needs a null and an alternative profile");
        BehaviorProfile p0 = io::load_profile(profiles[0]);
        BehaviorProfile p1 = io::load_profile(profiles[1]);
        std::string x = single_event(event, stream_path, p0.alphabet());
        report = np_decide(p0, p1, opts.alpha, x, randomized(opts), opts.seed);
    } else {
        if (profiles.size() != 1)
            throw ParseError(kind + " test takes one null profile");
        BehaviorProfile p0 = io::load_profile(profiles[0]);
        std::string x = single_event(event, stream_path, p0.alphabet());
        if (kind == "fisher") {
            report = fisher_decide(p0, x, opts.alpha);
        } else {  // point
            report.decision = point_significance(p0, x, opts.alpha);
            report.statistic_value = p0.prob(x);
            report.threshold = opts.alpha;
            report.size = 0.0;
            for (const auto& y : p0.alphabet().symbols())
                if (p0.prob(y) < opts.alpha) report.size += p0.prob(y);
        }
    }
    std::ostringstream text;
    text << kind << " test: " << io::verdict_name(report.decision.verdict)
         << "\n  statistic " << report.statistic_value << "  threshold "
         << report.threshold << "\n  size " << report.size << "  power "
         << report.power << "\n";
    emit(opts, io::report_to_json(report), text.str());
    return report.decision.verdict == Verdict::Reject ? kExitReject : kExitRetain;
}

int run_bayes(const std::string& hset_path, const std::string& stream_path,
              const CommonOptions& opts) {
    HypothesisSet hset = io::load_hypothesis_set(hset_path);
    std::vector<std::string> stream;
    if (!stream_path.empty())
        stream = io::load_stream(stream_path, hset.alphabet());
    Posterior post = sequential_update(hset, stream);
    const Hypothesis& map = map_hypothesis(post);

    json weights = json::object();
    std::ostringstream text;
    text << "posterior after " << stream.size() << " events:\n";
    for (std::size_t i = 0; i < post.hypotheses.size(); ++i) {
        const auto& h = post.hypotheses.at(i);
        weights[h.id] = post.weight(i);
        text << "  " << h.id << ": " << post.weight(i) << "\n";
    }
    text << "map: " << map.id << "\n";
    emit(opts,
         json{{"weights", weights},
              {"map", map.id},
              {"log2_evidence", post.log2_evidence}},
         text.str());
    return kExitRetain;
}

int run_mdl(const std::string& stream_path, const std::string& alphabet_spec,
            const CommonOptions& opts) {
    std::vector<std::string> symbols;
    std::istringstream in(alphabet_spec);
    std::string symbol;
    while (std::getline(in, symbol, ','))
        if (!symbol.empty()) symbols.push_back(symbol);
    AlphabetPtr alphabet = make_alphabet(std::move(symbols));

    auto events = io::load_stream(stream_path, *alphabet);
    Observation obs = io::observation_from_events(events, alphabet);
    QuantizedFamily family(alphabet, opts.k);
    Hypothesis selected = formulate_null(obs, family);
    CodeLength data_bits = data_code_length(selected.profile, obs);
    CodeLength hyp_bits = hypothesis_code_length(family, selected);
    CodeLength lz = compressor_length_estimate(obs, events);

    json j = {{"selected", io::profile_to_json(selected.profile)},
              {"two_part_bits", data_bits.bits + hyp_bits.bits},
              {"data_bits", data_bits.bits},
              {"hypothesis_bits", hyp_bits.bits},
              {"family_size", family.size()},
              {"compressor_bits", lz.bits}};
    std::ostringstream text;
    text << "selected null hypothesis (k=" << opts.k << "):\n";
    for (std::size_t i = 0; i < alphabet->size(); ++i)
        text << "  " << alphabet->symbol(i) << ": " << selected.profile.prob(i)
             << "\n";
    text << "two-part " << data_bits.bits + hyp_bits.bits << " bits (data "
         << data_bits.bits << " + hypothesis " << hyp_bits.bits
         << "), family size " << family.size() << ", lz78 estimate " << lz.bits
         << " bits\n";
    emit(opts, j, text.str());
    return kExitRetain;
}

int run_simulate(const std::string& profile_path, std::uint64_t n,
                 const CommonOptions& opts, const std::string& out_path) {
    if (!opts.seed)
        throw ParseError("simulate requires --seed (no wall-clock seeding)");
    BehaviorProfile profile = io::load_profile(profile_path);
    auto stream = simulate_stream({profile, n, *opts.seed});
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw ParseError("cannot write '" + out_path + "'");
        out = &file;
    }
    for (const auto& event : stream.events) *out << event << "\n";
    return kExitRetain;
}

int run_calibrate(const std::string& p0_path, const std::string& p1_path,
                  std::uint64_t trials, const CommonOptions& opts) {
    if (!opts.seed)
        throw ParseError("calibrate requires --seed (no wall-clock seeding)");
    BehaviorProfile p0 = io::load_profile(p0_path);
    BehaviorProfile p1 = io::load_profile(p1_path);
    ErrorRateReport report = monte_carlo_error_rates(p0, p1, opts.alpha, trials,
                                                     *opts.seed, randomized(opts));
    json j = {{"fpr_hat", report.fpr_hat},
              {"fnr_hat", report.fnr_hat},
              {"trials", report.trials},
              {"alpha_requested", report.alpha_requested},
              {"wilson_halfwidth", report.wilson_halfwidth}};
    std::ostringstream text;
    text << "calibration over " << report.trials << " trials (alpha "
         << report.alpha_requested << "):\n  fpr " << report.fpr_hat << "  fnr "
         << report.fnr_hat << "  wilson +/- " << report.wilson_halfwidth << "\n";
    emit(opts, j, text.str());
    return kExitRetain;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"statistical trust decisions on behavior profiles"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::uint64_t seed_value = 0;
    bool seed_given = false;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--alpha", opts.alpha, "significance level")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--variant", opts.variant, "deterministic|randomized")
            ->check(CLI::IsMember({"deterministic", "randomized"}));
        cmd->add_option("--k", opts.k, "grid resolution (probabilities are multiples of 2^-k)");
        cmd->add_option("--seed", seed_value, "PRNG seed")
            ->each([&](const std::string&) { seed_given = true; });
        cmd->add_option("--output", opts.output, "text|json")
            ->check(CLI::IsMember({"text", "json"}));
    };

    // test fisher|point|np
    auto* test = app.add_subcommand("test", "hypothesis tests on a single event");
    test->require_subcommand(1);
    std::vector<std::string> profiles;
    std::string event, stream_path;
    std::string test_kind;
    for (const char* kind : {"fisher", "point", "np"}) {
        auto* sub = test->add_subcommand(kind);
        sub->add_option("profiles", profiles, "profile file(s): null [alternative]")
            ->required();
        sub->add_option("--event", event, "observed behavior symbol");
        sub->add_option("--stream", stream_path, "single-event stream file");
        add_common(sub);
        sub->callback([&, kind] { test_kind = kind; });
    }

    auto* bayes_cmd = app.add_subcommand("bayes", "Bayesian posterior over a hypothesis set");
    std::string hset_path, bayes_stream;
    bayes_cmd->add_option("hypotheses", hset_path, "hypothesis-set file")->required();
    bayes_cmd->add_option("--stream", bayes_stream, "event stream file");
    add_common(bayes_cmd);

    auto* mdl_cmd = app.add_subcommand("mdl", "formulate the null hypothesis by MDL");
    std::string mdl_stream, alphabet_spec;
    mdl_cmd->add_option("--stream", mdl_stream, "baseline event stream file")->required();
    mdl_cmd->add_option("--alphabet", alphabet_spec, "comma-separated behavior symbols")
        ->required();
    add_common(mdl_cmd);

    auto* sim_cmd = app.add_subcommand("simulate", "sample a seeded behavior stream");
    std::string sim_profile, sim_out;
    std::uint64_t sim_n = 0;
    sim_cmd->add_option("profile", sim_profile, "generating profile file")->required();
    sim_cmd->add_option("-n,--length", sim_n, "number of events")->required();
    sim_cmd->add_option("--out", sim_out, "output stream file (default stdout)");
    add_common(sim_cmd);

    auto* cal_cmd = app.add_subcommand("calibrate", "Monte Carlo error-rate estimate");
    std::string cal_p0, cal_p1;
    std::uint64_t cal_trials = 10000;
    cal_cmd->add_option("null", cal_p0, "null profile file")->required();
    cal_cmd->add_option("alternative", cal_p1, "alternative profile file")->required();
    cal_cmd->add_option("--trials", cal_trials, "number of trials");
    add_common(cal_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    if (seed_given) opts.seed = seed_value;

    try {
        if (*test) return run_test(test_kind, profiles, event, stream_path, opts);
        if (*bayes_cmd) return run_bayes(hset_path, bayes_stream, opts);
        if (*mdl_cmd) return run_mdl(mdl_stream, alphabet_spec, opts);
        if (*sim_cmd) return run_simulate(sim_profile, sim_n, opts, sim_out);
        if (*cal_cmd) return run_calibrate(cal_p0, cal_p1, cal_trials, opts);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

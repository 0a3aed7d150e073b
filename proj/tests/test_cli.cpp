// Exercises the installed CLI end to end. The binary path arrives through
// the TRUST_CLI environment variable, set by ctest.

#include <catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

std::string cli() {
    const char* path = std::getenv("TRUST_CLI");
    REQUIRE(path != nullptr);
    return path;
}

std::string fixture(const std::string& name) {
    return std::string(TRUSTLAB_FIXTURE_DIR) + "/" + name;
}

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args) {
    std::string command = cli() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    std::array<char, 4096> buffer;
    while (std::size_t n = fread(buffer.data(), 1, buffer.size(), pipe))
        output.append(buffer.data(), n);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), output};
}

} // namespace

TEST_CASE("np test rejects on the delay event with exit 1") {
    auto result = run("test np --alpha 0.01 " + fixture("p0.json") + " " +
                      fixture("p1.json") + " --event d --output json");
    CHECK(result.exit_code == 1);
    json j = json::parse(result.output);
    CHECK(j["verdict"] == "reject");
    CHECK(j["size"].get<double>() == Catch::Approx(0.01));
    CHECK(j["power"].get<double>() == Catch::Approx(0.9));
}

TEST_CASE("np test retains on normal behavior with exit 0") {
    auto result = run("test np --alpha 0.01 " + fixture("p0.json") + " " +
                      fixture("p1.json") + " --event a");
    CHECK(result.exit_code == 0);
}

TEST_CASE("fisher test retains on the likely event") {
    auto result = run("test fisher --alpha 0.01 " + fixture("p0.json") +
                      " --event a --output json");
    CHECK(result.exit_code == 0);
    json j = json::parse(result.output);
    CHECK(j["verdict"] == "retain");
    CHECK(j["statistic"].get<double>() == 1.0);
}

TEST_CASE("point test rejects crashes at 1%") {
    CHECK(run("test point --alpha 0.01 " + fixture("p0.json") + " --event c")
              .exit_code == 1);
}

TEST_CASE("malformed inputs exit 2") {
    CHECK(run("test fisher " + fixture("bad_profile.json") + " --event a")
              .exit_code == 2);
    CHECK(run("test fisher " + fixture("p0.json") + " --event zz").exit_code == 2);
    CHECK(run("test np " + fixture("p0.json") + " --event d").exit_code == 2);
    CHECK(run("nonsense-subcommand").exit_code == 2);
}

TEST_CASE("bayes subcommand reports weights and the MAP id") {
    std::string stream_path = "/tmp/trustlab_cli_stream.txt";
    {
        std::ofstream out(stream_path);
        out << "d\n";
    }
    auto result = run("bayes " + fixture("hset.json") + " --stream " +
                      stream_path + " --output json");
    CHECK(result.exit_code == 0);
    json j = json::parse(result.output);
    CHECK(j["map"] == "theta1");
    CHECK(j["weights"]["theta1"].get<double>() == Catch::Approx(0.45 / 0.455));

    // empty stream echoes the prior
    auto prior = run("bayes " + fixture("hset.json") + " --output json");
    json p = json::parse(prior.output);
    CHECK(p["weights"]["theta0"].get<double>() == Catch::Approx(0.5));

    {
        std::ofstream out(stream_path);
        out << "q\n";
    }
    CHECK(run("bayes " + fixture("hset.json") + " --stream " + stream_path)
              .exit_code == 2);
    std::remove(stream_path.c_str());
}

TEST_CASE("simulate then mdl recovers an all-a corner") {
    std::string stream_path = "/tmp/trustlab_cli_sim.txt";
    std::string corner_path = "/tmp/trustlab_cli_corner.json";
    {
        std::ofstream out(corner_path);
        out << R"({"alphabet": ["a","b","c","d"],
                   "probs": {"a": 1.0, "b": 0.0, "c": 0.0, "d": 0.0}})";
    }
    CHECK(run("simulate " + corner_path + " -n 200 --seed 9 --out " +
              stream_path)
              .exit_code == 0);
    auto result =
        run("mdl --stream " + stream_path + " --alphabet a,b,c,d --k 4 --output json");
    CHECK(result.exit_code == 0);
    json j = json::parse(result.output);
    CHECK(j["selected"]["probs"]["a"].get<double>() == 1.0);
    CHECK(j["family_size"].get<std::uint64_t>() == 969);  // C(19,3)
    CHECK(j["data_bits"].get<double>() == 0.0);

    // simulate without a seed is an error, never wall-clock seeded
    CHECK(run("simulate " + corner_path + " -n 5").exit_code == 2);

    // a grid too fine for four symbols overflows the enumeration bound
    CHECK(run("mdl --stream " + stream_path + " --alphabet a,b,c,d --k 12")
              .exit_code == 2);
    std::remove(stream_path.c_str());
    std::remove(corner_path.c_str());
}

TEST_CASE("calibrate reports error rates as JSON") {
    auto result = run("calibrate " + fixture("p0.json") + " " +
                      fixture("p1.json") +
                      " --alpha 0.01 --trials 2000 --seed 11 --output json");
    CHECK(result.exit_code == 0);
    json j = json::parse(result.output);
    CHECK(j["trials"].get<int>() == 2000);
    CHECK(j["fpr_hat"].get<double>() <= 0.03);
    CHECK(j["fnr_hat"].get<double>() == Catch::Approx(0.1).margin(0.03));
}

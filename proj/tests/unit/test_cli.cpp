#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "mmwb/cli.hpp"

using namespace mmwb;
using nlohmann::json;

namespace {

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int status = run_cli(args, out, err);
    return {status, out.str(), err.str()};
}

json cli_json(std::vector<std::string> args) {
    Run r = cli(std::move(args));
    INFO(r.err);
    REQUIRE(r.status == 0);
    json j = json::parse(r.out);
    for (const char* key : {"command", "config", "tool_version", "seed", "started", "finished", "output_digest"})
        CHECK(j["manifest"].contains(key));
    CHECK(j["manifest"]["output_digest"] == fnv1a_hex(j["result"].dump()));
    return j["result"];
}

json coefficient(const json& coeffs, const std::vector<int>& index) {
    for (const auto& c : coeffs)
        if (c["index"].get<std::vector<int>>() == index) return c["value"];
    return 0;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("digest") {
        CHECK(fnv1a_hex("") == "cbf29ce484222325");
        CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    }

    TEST_CASE("moments") {
        json r = cli_json({"moments", "--potential", "x1^4", "--order", "2", "--query", "x1^2,x1^4"});
        REQUIRE(r["queries"].size() == 2);
        CHECK(coefficient(r["queries"][0]["coefficients"], {1}) == "-8");
        json n = cli_json({"moments", "--potential", "0.01*x1^4", "--mode", "numeric", "--degree", "16", "--query", "x1^2"});
        CHECK(n["queries"].size() == 1);
    }

    TEST_CASE("maps") {
        json c = cli_json({"maps", "census", "--stars", "x1^4,x1^4", "--colors", "1"});
        CHECK(c["genus_counts"]["0"] == 36);
        json t = cli_json({"maps", "two-star", "--potential", "0", "--order", "0", "--pair", "x1^4,x1^4"});
        CHECK(coefficient(t["coefficients"], {}) == "36");
        json g = cli_json({"maps", "genus1", "--potential", "x1^4", "--order", "1", "--query", "x1^4"});
        CHECK(coefficient(g["coefficients"], {0}) == "1");
    }

    TEST_CASE("variance, correction and free energy") {
        json v = cli_json({"variance", "--potential", "0", "--order", "0", "--pair", "x1^2,x1^2"});
        CHECK(coefficient(v["coefficients"], {}) == "2");
        json c = cli_json({"correction", "--potential", "x1^4", "--order", "2", "--query", "x1^4"});
        CHECK(c["cross_check"] == true);
        json f = cli_json({"free-energy", "--potential", "x1^4", "--order", "2"});
        CHECK(f["pass"] == true);
        CHECK(coefficient(f["F0"], {1}) == "-2");
    }

    TEST_CASE("Monte Carlo subcommands") {
        json r = cli_json({"--seed", "3", "mc", "run", "--N", "10", "--samples", "50", "--observables", "x1^2"});
        CHECK(r["observables"].size() == 1);
        json f = cli_json({"mc", "fluct", "--N", "10", "--samples", "100", "--query", "x1^2"});
        CHECK(f.dump().find("predicted") != std::string::npos);
        json t = cli_json({"mc", "tail", "--samples", "20", "--M", "3", "--Ns", "10,20"});
        CHECK(t.dump().find("frequencies") != std::string::npos);
    }

    TEST_CASE("trace output") {
        auto path = (std::filesystem::temp_directory_path() / "mmwb_cli_trace.bin").string();
        json r = cli_json({"mc", "run", "--N", "8", "--samples", "5", "--observables", "x1^2,x1^4", "--trace", path});
        CHECK(std::filesystem::file_size(path) == 16 + 5 * 2 * 8);
        std::filesystem::remove(path);
    }

    TEST_CASE("csv output carries the manifest") {
        Run r = cli({"--output", "csv", "maps", "census", "--stars", "x1^4"});
        REQUIRE(r.status == 0);
        std::istringstream in(r.out);
        std::string line;
        std::getline(in, line);
        CHECK(line.rfind("# manifest {", 0) == 0);
        std::getline(in, line);
        CHECK(line == "genus,count");
        std::getline(in, line);
        CHECK(line == "0,2");
    }

    TEST_CASE("exit codes") {
        Run parse = cli({"moments", "--potential", "x1^4 + * x2"});
        CHECK(parse.status == 2);
        CHECK(parse.err.find("parse error at position") != std::string::npos);
        Run adj = cli({"moments", "--potential", "(1+i)*x1*x2"});
        CHECK(adj.status == 2);
        Run bad = cli({"mc", "run", "--N", "1"});
        CHECK(bad.status == 2);
        Run unknown = cli({"frobnicate"});
        CHECK(unknown.status != 0);
    }

    TEST_CASE("verify") {
        auto path = (std::filesystem::temp_directory_path() / "mmwb_cli_verify.json").string();
        Run r = cli({"verify", "--only", "1", "--out", path});
        CHECK(r.status == 0);
        CHECK(r.out.find("PASS criterion 1") != std::string::npos);
        std::ifstream in(path);
        json j = json::parse(in);
        CHECK(j["result"]["checks"][0]["pass"] == true);
        std::filesystem::remove(path);
        Run flipped = cli({"verify", "--only", "7", "--inject-xi1-sign-flip"});
        CHECK(flipped.status != 0);
    }
}

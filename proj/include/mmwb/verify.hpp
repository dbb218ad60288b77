#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace mmwb {

struct VerifyOptions {
    std::uint64_t seed = 20240601;
    bool xi1_sign_flip = false;  // mutation check: flips the sign of Xi_1 everywhere
    int random_cases = 50;
};

struct CheckResult {
    std::string id;
    std::string title;
    bool pass = false;
    bool reproducible = true;  // false for checks declared out of reach
    std::string summary;
    std::vector<std::string> notes;
    double seconds = 0;
    nlohmann::json data = nlohmann::json::object();
};

/// All acceptance criteria in order.
const std::vector<std::string>& criterion_ids();
/// The exact (symbolic) subset run by `verify --level quick`.
const std::vector<std::string>& quick_criterion_ids();

/// Runs one criterion; exceptions are reported as failures.
CheckResult run_criterion(const std::string& id, const VerifyOptions& opt);

nlohmann::json to_json(const CheckResult& r);

}  // namespace mmwb

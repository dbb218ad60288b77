#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace mmwb {

inline constexpr const char* kToolVersion = "0.1.0";

/// Provenance record embedded in every emitted result.
struct RunManifest {
    std::string command;
    nlohmann::json config;
    std::string tool_version = kToolVersion;
    std::uint64_t seed = 0;
    std::string started;
    std::string finished;
    std::string output_digest;  // FNV-1a 64 of the serialized result

    nlohmann::json to_json() const;
};

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(const std::string& data);

/// Entry point of the command-line tool; returns the process exit status.
/// Results go to `out` (or the --out file), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mmwb

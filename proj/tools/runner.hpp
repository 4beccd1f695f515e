#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"

namespace pulsebench::cli {

enum class Command { Run, Sweep, Optimize, Walk };

struct RunManifest {
    Command command = Command::Run;
    RunConfig config;
    std::string config_path;  // empty when only a preset was given
    std::vector<std::uint64_t> seeds{0};
    bool suffix_seeds = false;  // --seeds N appends _s<seed> to every file
    std::vector<ShapeKind> shapes;  // sweep restriction; empty selects all six
    bool protocol_fixed = false;    // --protocol restricts a sweep to one protocol
    std::filesystem::path out_dir = ".";
    int workers = 0;
};

std::string command_tag(Command c);

/// Git blob SHA-1 of the serialized resolved configuration.
std::string config_hash(const RunConfig& config);

/// Writes to a sibling temporary file, then renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Executes the manifest and returns the files written, in a deterministic order.
std::vector<std::filesystem::path> run_command(const RunManifest& manifest);

}  // namespace pulsebench::cli

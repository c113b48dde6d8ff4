// Batch command-line front end. Every command writes its data files and a
// manifest.json into the output directory.
#pragma once

#include "sgmeta/field.hpp"
#include "sgmeta/simulate.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace sgmeta::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;

struct RunManifest {
  std::string command;
  ModelParams params;
  SimConfig config;
  /// Recorded only when supplied via --timestamp or SOURCE_DATE_EPOCH.
  std::optional<std::string> timestamp;
  std::string code_version;
  std::uint64_t seed = 0;
  /// Arguments that reproduce the run, without --out.
  std::vector<std::string> args;
  /// File names relative to the output directory.
  std::vector<std::string> outputs;
};

std::string code_version();

/// Pretty-printed JSON with a trailing newline.
std::string manifest_json(const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& path);

/// Runs one command; args start with the subcommand name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sgmeta::cli

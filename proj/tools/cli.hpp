#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "por/netsim.hpp"

namespace por::cli {

enum class OutputFormat { Text, Json, Csv };

/// Simulation settings plus the paths and output options the commands need.
struct CliConfig {
  SimConfig sim;
  std::vector<std::uint64_t> seeds;  // empty: just sim.seed
  unsigned jobs = 1;
  std::optional<std::filesystem::path> chain_path;
  std::optional<std::filesystem::path> metrics_path;
  std::optional<std::filesystem::path> keys_path;
  OutputFormat format = OutputFormat::Text;
};

inline constexpr int kConfigVersion = 1;

/// Reads a JSON config file. Unknown keys, a missing or unsupported
/// config_version, and type mismatches throw ConfigInvalid.
CliConfig load_config_file(const std::filesystem::path& path);

/// "a..b" inclusive, or a single number.
std::vector<std::uint64_t> parse_seed_range(const std::string& text);

/// chain.jsonl, 7 -> chain.seed-7.jsonl
std::filesystem::path seed_path(const std::filesystem::path& path, std::uint64_t seed);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Returns 0 on success, 1 for configuration or validation
/// failures, 2 for runtime failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace por::cli

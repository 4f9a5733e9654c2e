#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace dfd {

inline constexpr const char* kToolVersion = "0.1.0";

namespace artifacts {

std::uint64_t fnv1a64(const std::string& data);

std::string hash_hex(std::uint64_t h);

// "dfd v0.1.0 config=<hex> seed=<n>" — embedded into every artifact header.
std::string header_line(std::uint64_t config_hash, std::uint64_t seed);

// First line of CSV/JSON artifacts. CSV readers skip '#'; JSON artifacts are
// parsed back with comment support enabled.
std::string csv_header(std::uint64_t config_hash, std::uint64_t seed);
std::string json_header(std::uint64_t config_hash, std::uint64_t seed);

void append_runlog(const std::filesystem::path& path, const std::string& subcommand,
                   std::uint64_t config_hash, std::uint64_t seed, int exit_code);

}  // namespace artifacts
}  // namespace dfd

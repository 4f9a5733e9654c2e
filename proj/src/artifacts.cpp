#include "dfd/artifacts.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

namespace dfd::artifacts {

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string header_line(std::uint64_t config_hash, std::uint64_t seed) {
    return std::string("dfd v") + kToolVersion + " config=" + hash_hex(config_hash) +
           " seed=" + std::to_string(seed);
}

std::string csv_header(std::uint64_t config_hash, std::uint64_t seed) {
    return "# " + header_line(config_hash, seed) + "\n";
}

std::string json_header(std::uint64_t config_hash, std::uint64_t seed) {
    return "// " + header_line(config_hash, seed) + "\n";
}

void append_runlog(const std::filesystem::path& path, const std::string& subcommand,
                   std::uint64_t config_hash, std::uint64_t seed, int exit_code) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
    std::ofstream out(path, std::ios::app);
    out << "{\"ts_ms\":" << ms << ",\"cmd\":\"" << subcommand << "\",\"config\":\"" << hash_hex(config_hash)
        << "\",\"seed\":" << seed << ",\"exit\":" << exit_code << "}\n";
}

}  // namespace dfd::artifacts

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace dfd::pipeline {

// Parsed run configuration plus the derived artifact header material.
struct Context {
    nlohmann::json config;
    std::filesystem::path config_dir;  // relative paths resolve against this
    std::filesystem::path out_dir;
    std::uint64_t seed = 0;
    int threads = 1;
    std::uint64_t config_hash = 0;

    std::string csv_header() const;
    std::string json_header() const;
    std::string svg_header() const;  // bare header line (svg::Doc wraps it)

    std::filesystem::path resolve(const std::string& path) const;
    const nlohmann::json& require(const std::string& key) const;  // top-level, error names the key
};

struct Overrides {
    std::vector<std::string> sets;  // dotted.key=json-or-string
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> out_dir;
};

Context load_context(const std::filesystem::path& config_path, const Overrides& overrides);

void run_corpus_score(const Context& ctx);
void run_corpus_cluster(const Context& ctx);
void run_db_synth(const Context& ctx);
void run_db_ingest(const Context& ctx);
void run_db_impute(const Context& ctx);
void run_identify_dims(const Context& ctx);
void run_identify_features(const Context& ctx);
void run_forecast_compare(const Context& ctx);
void run_analyze_sobol(const Context& ctx);
void run_analyze_pdp(const Context& ctx);
void run_analyze_lag(const Context& ctx);
void run_report(const Context& ctx);

}  // namespace dfd::pipeline

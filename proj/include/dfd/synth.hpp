#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dfd/date.hpp"
#include "dfd/stdb.hpp"

namespace dfd::synth {

struct Config {
    int days = 3000;
    Date start = Date::from_ymd(2015, 1, 1);
    double noise = 1.0;  // scales every irregular component; 0 = fully deterministic signals
    std::uint64_t seed = 0;
    int g_count = 28;
    int a_count = 12;
    int i_count = 10;
    int s_count = 10;
};

struct Dataset {
    std::vector<stdb::FeatureSeries> features;  // candidate features (gas_consumption is monthly)
    stdb::FeatureSeries load;                   // fully observed daily target
    std::vector<std::string> planted;           // informative feature names
    std::string dominant_dimension;             // dimension with the largest load contribution
    int ghi_lag_days = 0;                       // planted irradiance lag
};

Dataset generate(const Config& config);

// Emits <name>.csv per feature, load.csv, manifest.json, ground_truth.json.
// Returns the written paths (sorted).
std::vector<std::filesystem::path> write_dataset(const Config& config, const std::filesystem::path& dir,
                                                 const std::string& csv_header, const std::string& json_header);

}  // namespace dfd::synth

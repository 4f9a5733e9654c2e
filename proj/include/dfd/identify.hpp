#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dfd/stdb.hpp"

namespace dfd::identify {

// Model hook: full input row -> prediction. Keeps this module model-agnostic.
using PredictFn = std::function<double(const std::vector<double>&)>;

struct DimensionAttribution {
    std::vector<std::string> groups;
    std::vector<std::vector<double>> values;  // sample-major: values[s][g]
    std::vector<double> predictions;          // model output per sample (all groups present)
    double baseline = 0.0;                    // model output with every group at its baseline values
    std::vector<double> mean_abs;             // per group
    std::vector<double> sign_positive;        // fraction of samples with positive attribution, per group
};

// Exact group Shapley by coalition enumeration (== permutation average); <= 8 groups.
DimensionAttribution grouped_shapley(const PredictFn& model, const std::vector<std::vector<double>>& samples,
                                     const std::vector<double>& baseline_row,
                                     const std::vector<std::vector<int>>& groups,
                                     const std::vector<std::string>& group_names);

// Monte-Carlo permutation sampling for larger group counts.
DimensionAttribution grouped_shapley_sampled(const PredictFn& model, const std::vector<std::vector<double>>& samples,
                                             const std::vector<double>& baseline_row,
                                             const std::vector<std::vector<int>>& groups,
                                             const std::vector<std::string>& group_names, int permutations,
                                             std::uint64_t seed);

struct FeatureScore {
    std::string name;
    stdb::Dimension dimension = stdb::Dimension::G;
    double variance = 0.0;
    double r = 0.0;
    double f = 0.0;
    bool passed_variance = false;
    bool passed_kbest = false;
};

// Population variance per non-target column; passed_variance = variance >= threshold.
std::vector<FeatureScore> variance_filter(const stdb::FeatureTable& table, double threshold);

// Pearson r and f = r^2/(1-r^2)*(n-2); |r| -> 1 maps to +inf.
std::pair<double, double> f_score(const std::vector<double>& x, const std::vector<double>& y);

// Fills r/f for variance-passing columns; passed_kbest = f >= threshold (or top-K when top_k > 0).
// Result sorted by f descending, ties by name.
std::vector<FeatureScore> select_features(std::vector<FeatureScore> scores, const stdb::FeatureTable& table,
                                          double threshold, int top_k = 0);

struct LvkbResult {
    std::vector<FeatureScore> scores;      // all columns, sorted by f descending
    std::vector<std::string> identified;   // kept names, same order
    std::map<char, int> counts;            // identified tally per dimension tag
    double variance_threshold = 0.0;
    double kbest_threshold = 0.0;
};

LvkbResult lvkb(const stdb::FeatureTable& table, double variance_threshold, double kbest_threshold, int top_k = 0);

std::string attribution_to_csv(const DimensionAttribution& attr, const std::vector<std::string>& sample_ids,
                               const std::string& header_comment);
std::string scores_to_csv(const std::vector<FeatureScore>& scores, const std::string& header_comment,
                          double variance_threshold, double kbest_threshold);
std::string counts_to_json(const LvkbResult& result, const std::string& header_comment);

}  // namespace dfd::identify

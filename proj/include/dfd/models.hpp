#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dfd/date.hpp"
#include "dfd/gbrt.hpp"
#include "dfd/mlp.hpp"
#include "dfd/stdb.hpp"

namespace dfd::models {

enum class Kind { ridge, gbrt, mlp };

Kind parse_kind(const std::string& name);
std::string kind_name(Kind kind);

struct ModelSpec {
    Kind kind = Kind::ridge;
    std::uint64_t seed = 0;
    double lambda = 1e-3;  // ridge
    GbrtParams gbrt;
    MlpParams mlp;
};

struct MinMaxScaler {
    std::vector<double> lo, range;  // zero range maps the feature to 0
    void fit(const std::vector<double>& X, std::size_t n, std::size_t d);
    void transform_row(const double* raw, double* scaled) const;
};

struct RidgeFit {
    std::vector<double> beta;
    double intercept = 0.0;
};

struct TrainedModel {
    ModelSpec spec;
    std::vector<stdb::FeatureTable::Column> columns;  // inputs, in training order (target excluded)
    std::string target;
    Date train_begin, train_end;
    MinMaxScaler scaler;

    // Exactly one is populated, per spec.kind.
    RidgeFit ridge;
    GbrtModel gbrt;
    MlpNet mlp;
    double y_mean = 0.0, y_sd = 1.0;  // mlp target standardization
    std::vector<double> train_mse;    // per stage/epoch; front() is the pre-fit loss

    double predict_row(const std::vector<double>& raw) const;  // raw feature row, training order
    std::vector<double> predict(const stdb::FeatureTable& rows) const;
};

TrainedModel fit(const ModelSpec& spec, const stdb::FeatureTable& train);

struct Metrics {
    double mape = 0.0;  // percent
    double rmse = 0.0;
    double mae = 0.0;
    std::size_t n = 0;
};

Metrics evaluate(const std::vector<double>& y_true, const std::vector<double>& y_pred);

struct ComparisonEntry {
    std::string scheme;
    std::string model;
    Metrics metrics;
    double mape_gain_vs_first = 0.0;  // % MAPE reduction vs the first scheme, same model
    double mape_gain_vs_best_other = 0.0;  // % reduction vs best other scheme, same model
};

struct ComparisonReport {
    std::vector<std::string> schemes;
    std::vector<std::string> models;
    std::vector<ComparisonEntry> entries;  // scheme-major, model-minor

    const ComparisonEntry& at(const std::string& scheme, const std::string& model) const;
};

ComparisonReport compare_schemes(const stdb::FeatureTable& table, const std::vector<stdb::SchemeSpec>& schemes,
                                 const std::vector<ModelSpec>& specs, const stdb::DateRange& train,
                                 const stdb::DateRange& test);

std::string comparison_to_csv(const ComparisonReport& report, const std::string& header_comment);
std::string comparison_to_svg(const ComparisonReport& report, const std::string& header_comment);

}  // namespace dfd::models

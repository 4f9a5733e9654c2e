#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dfd/identify.hpp"
#include "dfd/models.hpp"
#include "dfd/stdb.hpp"

namespace dfd::analyze {

using ModelFn = std::function<double(const std::vector<double>&)>;

// Mean of min-max-normalized member features per dimension (columns G, A, I, S),
// with the load target carried through as the final column.
stdb::FeatureTable dimension_aggregate(const stdb::FeatureTable& table);

struct SobolReport {
    std::vector<std::string> names;
    std::vector<double> s1, st, s1_conf, st_conf;
    std::vector<std::vector<double>> s2, s2_conf;  // upper triangle (i < j) is meaningful
    int n = 0;
    std::uint64_t seed = 0;
};

// Saltelli sampling: (2d+2)*n model evaluations; bootstrap confidence half-widths.
SobolReport sobol_indices(const ModelFn& fn, const std::vector<std::pair<double, double>>& bounds,
                          const std::vector<std::string>& names, int n, std::uint64_t seed);

struct PDPCurve {
    std::string feature;
    std::vector<double> grid;
    std::vector<double> pd;
    std::size_t n = 0;  // training rows averaged
};

PDPCurve partial_dependence(const models::TrainedModel& model, const stdb::FeatureTable& train,
                            const std::string& feature, int grid_size);

struct LagReport {
    std::string feature;
    std::vector<double> correlations;  // index = lag in days
    int best_lag = 0;
    double best_r = 0.0;
};

LagReport lag_correlation(const std::vector<double>& x, const std::vector<double>& y, int max_lag,
                          const std::string& name = "");

std::string sobol_to_csv(const SobolReport& report, const std::string& header_comment);
std::string pdp_to_csv(const PDPCurve& curve, const std::string& header_comment);
std::string pdp_to_svg(const PDPCurve& curve, const std::string& header_comment);
std::string lags_to_csv(const std::vector<LagReport>& reports, const std::string& header_comment);

struct BeeswarmFiles {
    std::string csv;
    std::string svg;
};

// feature_values[s][g] colors the point for sample s, group g (raw group value).
BeeswarmFiles beeswarm_export(const identify::DimensionAttribution& attr,
                              const std::vector<std::vector<double>>& feature_values,
                              const std::vector<std::string>& sample_ids, std::uint64_t seed,
                              const std::string& header_comment);

}  // namespace dfd::analyze

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dfd/date.hpp"

namespace dfd::stdb {

// Domain feature dimensions: geography, astronomy, integrated energy,
// society, historical load.
enum class Dimension { G, A, I, S, L };

char dimension_char(Dimension d);
Dimension parse_dimension(const std::string& tag);  // accepts "G".."L"

enum class Cadence { daily, monthly };

struct FeatureSeries {
    std::string name;
    Dimension dimension = Dimension::G;
    std::string unit;
    Cadence cadence = Cadence::daily;
    std::vector<std::pair<Date, std::optional<double>>> values;  // dates strictly increasing
};

// Reads per-feature CSVs (header `date,value`) listed in a JSON manifest of
// {file, name, dimension, unit, cadence} entries. Unparseable cells become
// missing; validation failures name the file and line.
std::vector<FeatureSeries> ingest(const std::filesystem::path& dir, const std::filesystem::path& manifest);

// Expands a monthly series (values anchored on day 1 of each month) to daily
// cadence: linear interpolation between consecutive anchors, the last value
// held through the end of its month.
FeatureSeries monthly_to_daily(const FeatureSeries& series);

struct FeatureTable {
    struct Column {
        std::string name;
        Dimension dimension = Dimension::G;
    };

    std::vector<Date> dates;      // strictly increasing, one row each
    std::vector<Column> columns;
    std::vector<double> matrix;   // row-major; NaN marks a missing cell
    std::string target;           // label column name (dimension L)

    std::size_t rows() const { return dates.size(); }
    std::size_t cols() const { return columns.size(); }
    double& at(std::size_t r, std::size_t c) { return matrix[r * columns.size() + c]; }
    double at(std::size_t r, std::size_t c) const { return matrix[r * columns.size() + c]; }
    int col_index(const std::string& name) const;  // -1 when absent
    int target_index() const;
    std::vector<double> column_values(std::size_t c) const;
    bool complete() const;  // no NaN cells
};

// Aligns series onto the target's daily calendar. The target must be fully
// observed; other features contribute NaN where unobserved.
FeatureTable assemble(const std::vector<FeatureSeries>& series, const std::string& target);

// Chained-equation multiple imputation: each incomplete column is ridge-
// regressed on all others with a posterior noise draw, swept `rounds` times;
// the result is the mean over 5 independently seeded chains. Observed cells
// are never modified; a fully observed table is returned unchanged.
FeatureTable impute(const FeatureTable& table, int rounds, std::uint64_t seed, int threads = 1);

// Appends `source_lag_k` columns (dimension L) and drops the first max(lags)
// rows so the result stays complete.
FeatureTable add_lag_features(const FeatureTable& table, const std::string& source, const std::vector<int>& lags);

// Day-of-week one-hot (7 columns, dow_mon..dow_sun) plus day-of-year
// sine/cosine pair, all tagged dimension S.
FeatureTable add_date_coefficients(const FeatureTable& table);
std::vector<std::string> date_coefficient_names();

struct DateRange {
    Date begin, end;  // inclusive
};

std::pair<FeatureTable, FeatureTable> split(const FeatureTable& table, const DateRange& train, const DateRange& test);

struct SchemeSpec {
    std::string id;                      // S1..S5
    std::vector<std::string> included;   // feature names, excluding the target
};

// Column subset preserving the date index and the target column.
FeatureTable build_scheme(const FeatureTable& table, const SchemeSpec& spec);

// Wide-store serialization: header `date,DIM:name,...` plus a JSON sidecar
// carrying units and the target name.
void write_store(const FeatureTable& table, const std::filesystem::path& csv_path,
                 const std::filesystem::path& meta_path, const std::string& header_comment,
                 const std::vector<std::pair<std::string, std::string>>& units = {});
FeatureTable read_store(const std::filesystem::path& csv_path, const std::filesystem::path& meta_path);

}  // namespace dfd::stdb

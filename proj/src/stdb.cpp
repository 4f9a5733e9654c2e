#include "dfd/stdb.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dfd/csv.hpp"
#include "dfd/errors.hpp"
#include "dfd/rng.hpp"

namespace dfd::stdb {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

char dimension_char(Dimension d) {
    switch (d) {
        case Dimension::G: return 'G';
        case Dimension::A: return 'A';
        case Dimension::I: return 'I';
        case Dimension::S: return 'S';
        case Dimension::L: return 'L';
    }
    return '?';
}

Dimension parse_dimension(const std::string& tag) {
    if (tag == "G") return Dimension::G;
    if (tag == "A") return Dimension::A;
    if (tag == "I") return Dimension::I;
    if (tag == "S") return Dimension::S;
    if (tag == "L") return Dimension::L;
    throw ValidationError("unknown dimension tag '" + tag + "' (expected G, A, I, S, or L)");
}

std::vector<FeatureSeries> ingest(const std::filesystem::path& dir, const std::filesystem::path& manifest) {
    std::ifstream in(manifest);
    if (!in) throw ValidationError("cannot open manifest: " + manifest.string());
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
    if (!doc.is_array()) throw ValidationError("manifest must be a JSON array: " + manifest.string());

    std::vector<FeatureSeries> out;
    std::set<std::string> names;
    for (const auto& entry : doc) {
        FeatureSeries series;
        series.name = entry.at("name").get<std::string>();
        if (!names.insert(series.name).second)
            throw ValidationError("duplicate feature name '" + series.name + "' in " + manifest.string());
        try {
            series.dimension = parse_dimension(entry.at("dimension").get<std::string>());
        } catch (const ValidationError& e) {
            throw ValidationError(std::string(e.what()) + " (manifest entry '" + series.name + "')");
        }
        series.unit = entry.at("unit").get<std::string>();
        if (series.unit.empty()) throw ValidationError("empty unit for feature '" + series.name + "'");
        const std::string cadence = entry.at("cadence").get<std::string>();
        if (cadence == "daily")
            series.cadence = Cadence::daily;
        else if (cadence == "monthly")
            series.cadence = Cadence::monthly;
        else
            throw ValidationError("unknown cadence '" + cadence + "' for feature '" + series.name + "'");

        const auto file = dir / entry.at("file").get<std::string>();
        auto rows = csv::read_file(file);
        if (rows.empty()) throw ValidationError("empty feature file: " + file.string());
        std::size_t start = 0;
        if (!rows[0].cells.empty() && rows[0].cells[0] == "date") start = 1;  // header row
        for (std::size_t r = start; r < rows.size(); ++r) {
            const auto& row = rows[r];
            if (row.cells.size() != 2)
                throw ValidationError(file.string() + ":" + std::to_string(row.line) + ": expected `date,value`");
            Date date;
            try {
                date = Date::parse(row.cells[0]);
            } catch (const ValidationError& e) {
                throw ValidationError(file.string() + ":" + std::to_string(row.line) + ": " + e.what());
            }
            if (!series.values.empty() && !(series.values.back().first < date))
                throw ValidationError(file.string() + ":" + std::to_string(row.line) + ": non-monotone dates");
            series.values.emplace_back(date, csv::parse_cell(row.cells[1]));
        }
        out.push_back(std::move(series));
    }
    return out;
}

FeatureSeries monthly_to_daily(const FeatureSeries& series) {
    if (series.cadence != Cadence::monthly)
        throw ValidationError("monthly_to_daily: series '" + series.name + "' is not monthly");

    std::vector<std::pair<Date, double>> anchors;
    for (const auto& [date, value] : series.values) {
        if (!value) continue;
        if (date.day() != 1)
            throw ValidationError("monthly series '" + series.name + "' has a value off the month anchor on " +
                                  date.iso());
        anchors.emplace_back(date, *value);
    }
    if (anchors.size() < 2) throw ValidationError("cannot interpolate monthly series '" + series.name + "': needs >= 2 months");

    FeatureSeries out;
    out.name = series.name;
    out.dimension = series.dimension;
    out.unit = series.unit;
    out.cadence = Cadence::daily;

    for (std::size_t a = 0; a + 1 < anchors.size(); ++a) {
        const auto [d0, v0] = anchors[a];
        const auto [d1, v1] = anchors[a + 1];
        const int span = d1 - d0;
        for (Date d = d0; d < d1; ++d) {
            const double t = static_cast<double>(d - d0) / span;
            out.values.emplace_back(d, v0 + t * (v1 - v0));
        }
    }
    // Last anchor holds through the end of its month.
    const auto [dl, vl] = anchors.back();
    for (Date d = dl; d <= dl.last_of_month(); ++d) out.values.emplace_back(d, vl);
    return out;
}

int FeatureTable::col_index(const std::string& name) const {
    for (std::size_t c = 0; c < columns.size(); ++c)
        if (columns[c].name == name) return static_cast<int>(c);
    return -1;
}

int FeatureTable::target_index() const {
    const int idx = col_index(target);
    if (idx < 0) throw ValidationError("target column '" + target + "' not in table");
    return idx;
}

std::vector<double> FeatureTable::column_values(std::size_t c) const {
    std::vector<double> out(rows());
    for (std::size_t r = 0; r < rows(); ++r) out[r] = at(r, c);
    return out;
}

bool FeatureTable::complete() const {
    for (double v : matrix)
        if (std::isnan(v)) return false;
    return true;
}

FeatureTable assemble(const std::vector<FeatureSeries>& series, const std::string& target) {
    const FeatureSeries* target_series = nullptr;
    for (const auto& s : series)
        if (s.name == target) target_series = &s;
    if (!target_series) throw ValidationError("target series '" + target + "' not found");
    if (target_series->dimension != Dimension::L)
        throw ValidationError("target series '" + target + "' must have dimension L");
    if (target_series->values.empty()) throw ValidationError("target series '" + target + "' is empty");

    FeatureTable table;
    table.target = target;
    const Date begin = target_series->values.front().first;
    const Date end = target_series->values.back().first;
    for (Date d = begin; d <= end; ++d) table.dates.push_back(d);

    for (const auto& s : series) {
        if (s.cadence != Cadence::daily)
            throw ValidationError("assemble: series '" + s.name + "' must be daily (run monthly_to_daily first)");
        table.columns.push_back({s.name, s.dimension});
    }
    table.matrix.assign(table.rows() * table.cols(), kNaN);

    for (std::size_t c = 0; c < series.size(); ++c) {
        for (const auto& [date, value] : series[c].values) {
            if (date < begin || end < date) continue;
            if (value) table.at(static_cast<std::size_t>(date - begin), c) = *value;
        }
    }

    const int ti = table.target_index();
    for (std::size_t r = 0; r < table.rows(); ++r) {
        if (std::isnan(table.at(r, ti)))
            throw ValidationError("target '" + target + "' missing on " + table.dates[r].iso());
    }
    return table;
}

namespace {

// One chained-equation sweep state for a single chain.
void run_impute_chain(const FeatureTable& table, const std::vector<int>& incomplete,
                      const std::vector<std::vector<char>>& observed, int rounds, std::uint64_t chain_seed,
                      std::vector<double>& working) {
    const std::size_t n = table.rows();
    const std::size_t p = table.cols();
    Rng rng(chain_seed);

    auto cell = [&](std::size_t r, std::size_t c) -> double& { return working[r * p + c]; };

    // Start missing cells at the observed column mean.
    for (int j : incomplete) {
        double sum = 0;
        std::size_t count = 0;
        for (std::size_t r = 0; r < n; ++r)
            if (observed[j][r]) {
                sum += cell(r, j);
                ++count;
            }
        const double mean = sum / static_cast<double>(count);
        for (std::size_t r = 0; r < n; ++r)
            if (!observed[j][r]) cell(r, j) = mean;
    }

    const double lambda = 1e-6;
    for (int round = 0; round < rounds; ++round) {
        for (int j : incomplete) {
            std::vector<std::size_t> obs_rows, mis_rows;
            for (std::size_t r = 0; r < n; ++r) (observed[j][r] ? obs_rows : mis_rows).push_back(r);

            // Standardized predictors: every column except j.
            std::vector<int> preds;
            for (std::size_t c = 0; c < p; ++c)
                if (static_cast<int>(c) != j) preds.push_back(static_cast<int>(c));

            std::vector<double> mu(preds.size(), 0), sigma(preds.size(), 0);
            for (std::size_t k = 0; k < preds.size(); ++k) {
                double s = 0;
                for (std::size_t r : obs_rows) s += cell(r, preds[k]);
                mu[k] = s / obs_rows.size();
                double var = 0;
                for (std::size_t r : obs_rows) {
                    const double d = cell(r, preds[k]) - mu[k];
                    var += d * d;
                }
                sigma[k] = std::sqrt(var / obs_rows.size());
            }

            std::vector<int> active;
            for (std::size_t k = 0; k < preds.size(); ++k)
                if (sigma[k] > 0) active.push_back(static_cast<int>(k));

            double y_mean = 0;
            for (std::size_t r : obs_rows) y_mean += cell(r, j);
            y_mean /= obs_rows.size();

            Eigen::VectorXd beta;
            double noise_sd = 0;
            if (!active.empty()) {
                Eigen::MatrixXd X(obs_rows.size(), active.size());
                Eigen::VectorXd y(obs_rows.size());
                for (std::size_t ri = 0; ri < obs_rows.size(); ++ri) {
                    for (std::size_t ki = 0; ki < active.size(); ++ki) {
                        const int k = active[ki];
                        X(ri, ki) = (cell(obs_rows[ri], preds[k]) - mu[k]) / sigma[k];
                    }
                    y(ri) = cell(obs_rows[ri], j) - y_mean;
                }
                Eigen::MatrixXd gram = X.transpose() * X;
                gram.diagonal().array() += lambda;
                beta = gram.ldlt().solve(X.transpose() * y);
                const double ssr = (y - X * beta).squaredNorm();
                noise_sd = std::sqrt(std::max(0.0, ssr / std::max<std::size_t>(1, obs_rows.size() - 1)));
            }

            for (std::size_t r : mis_rows) {
                double pred = y_mean;
                for (std::size_t ki = 0; ki < active.size(); ++ki) {
                    const int k = active[ki];
                    pred += beta(ki) * ((cell(r, preds[k]) - mu[k]) / sigma[k]);
                }
                cell(r, j) = pred + rng.normal(0.0, noise_sd);
            }
        }
    }
}

}  // namespace

FeatureTable impute(const FeatureTable& table, int rounds, std::uint64_t seed, int threads) {
    if (rounds < 1) throw ValidationError("impute: rounds must be positive");
    if (table.complete()) return table;

    const std::size_t n = table.rows();
    const std::size_t p = table.cols();
    std::vector<std::vector<char>> observed(p, std::vector<char>(n, 0));
    std::vector<int> incomplete;
    for (std::size_t c = 0; c < p; ++c) {
        std::size_t count = 0;
        for (std::size_t r = 0; r < n; ++r) {
            if (!std::isnan(table.at(r, c))) {
                observed[c][r] = 1;
                ++count;
            }
        }
        if (count < n) incomplete.push_back(static_cast<int>(c));
        if (static_cast<double>(count) < 0.30 * static_cast<double>(n))
            throw ValidationError("impute: column '" + table.columns[c].name + "' has under 30% observed cells");
    }
    const int ti = table.target_index();
    for (std::size_t r = 0; r < n; ++r)
        if (!observed[ti][r]) throw ValidationError("impute: target column must be fully observed");

    constexpr int kChains = 5;
    std::vector<std::vector<double>> chains(kChains, table.matrix);

    auto run_chain = [&](int c) {
        run_impute_chain(table, incomplete, observed, rounds, seed + 0x9e3779b97f4a7c15ull * (c + 1), chains[c]);
    };
    if (threads > 1) {
        std::vector<std::future<void>> futures;
        for (int c = 0; c < kChains; ++c) futures.push_back(std::async(std::launch::async, run_chain, c));
        for (auto& f : futures) f.get();
    } else {
        for (int c = 0; c < kChains; ++c) run_chain(c);
    }

    FeatureTable out = table;
    for (int j : incomplete) {
        for (std::size_t r = 0; r < n; ++r) {
            if (observed[j][r]) continue;
            double sum = 0;
            for (int c = 0; c < kChains; ++c) sum += chains[c][r * p + j];
            out.at(r, j) = sum / kChains;
        }
    }
    return out;
}

FeatureTable add_lag_features(const FeatureTable& table, const std::string& source, const std::vector<int>& lags) {
    if (lags.empty()) return table;
    const int src = table.col_index(source);
    if (src < 0) throw ValidationError("add_lag_features: unknown source '" + source + "'");
    int max_lag = 0;
    for (int lag : lags) {
        if (lag < 1) throw ValidationError("add_lag_features: lags must be positive");
        if (static_cast<std::size_t>(lag) >= table.rows())
            throw ValidationError("add_lag_features: lag " + std::to_string(lag) + " >= series length");
        max_lag = std::max(max_lag, lag);
    }

    FeatureTable out;
    out.target = table.target;
    out.columns = table.columns;
    for (int lag : lags) out.columns.push_back({source + "_lag_" + std::to_string(lag), Dimension::L});
    out.dates.assign(table.dates.begin() + max_lag, table.dates.end());
    out.matrix.assign(out.rows() * out.cols(), kNaN);

    for (std::size_t r = 0; r < out.rows(); ++r) {
        const std::size_t old_r = r + max_lag;
        for (std::size_t c = 0; c < table.cols(); ++c) out.at(r, c) = table.at(old_r, c);
        for (std::size_t li = 0; li < lags.size(); ++li)
            out.at(r, table.cols() + li) = table.at(old_r - lags[li], src);
    }
    return out;
}

std::vector<std::string> date_coefficient_names() {
    return {"dow_mon", "dow_tue", "dow_wed", "dow_thu", "dow_fri", "dow_sat", "dow_sun", "doy_sin", "doy_cos"};
}

FeatureTable add_date_coefficients(const FeatureTable& table) {
    FeatureTable out = table;
    const auto names = date_coefficient_names();
    for (const auto& n : names) {
        if (table.col_index(n) >= 0) throw ValidationError("add_date_coefficients: column '" + n + "' already present");
        out.columns.push_back({n, Dimension::S});
    }
    out.matrix.assign(out.rows() * out.cols(), 0.0);
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t c = 0; c < table.cols(); ++c) out.at(r, c) = table.at(r, c);
        const Date d = table.dates[r];
        out.at(r, table.cols() + d.weekday()) = 1.0;
        const double phase = 2.0 * 3.14159265358979323846 * d.day_of_year() / 365.25;
        out.at(r, table.cols() + 7) = std::sin(phase);
        out.at(r, table.cols() + 8) = std::cos(phase);
    }
    return out;
}

std::pair<FeatureTable, FeatureTable> split(const FeatureTable& table, const DateRange& train, const DateRange& test) {
    if (train.end < train.begin || test.end < test.begin) throw ValidationError("split: range end before begin");
    if (!(train.end < test.begin)) throw ValidationError("split: test range must start after the train range ends");

    auto subset = [&](const DateRange& range) {
        FeatureTable part;
        part.columns = table.columns;
        part.target = table.target;
        std::vector<std::size_t> rows;
        for (std::size_t r = 0; r < table.rows(); ++r)
            if (range.begin <= table.dates[r] && table.dates[r] <= range.end) rows.push_back(r);
        part.dates.reserve(rows.size());
        part.matrix.reserve(rows.size() * table.cols());
        for (std::size_t r : rows) {
            part.dates.push_back(table.dates[r]);
            for (std::size_t c = 0; c < table.cols(); ++c) part.matrix.push_back(table.at(r, c));
        }
        return part;
    };

    FeatureTable train_part = subset(train);
    FeatureTable test_part = subset(test);
    if (train_part.rows() == 0) throw ValidationError("split: empty train");
    if (test_part.rows() == 0) throw ValidationError("split: empty test");
    return {std::move(train_part), std::move(test_part)};
}

FeatureTable build_scheme(const FeatureTable& table, const SchemeSpec& spec) {
    std::set<std::string> wanted(spec.included.begin(), spec.included.end());
    for (const auto& name : spec.included)
        if (table.col_index(name) < 0)
            throw ValidationError("scheme " + spec.id + ": unknown feature '" + name + "'");
    wanted.insert(table.target);

    FeatureTable out;
    out.dates = table.dates;
    out.target = table.target;
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < table.cols(); ++c) {
        if (wanted.count(table.columns[c].name)) {
            keep.push_back(c);
            out.columns.push_back(table.columns[c]);
        }
    }
    out.matrix.reserve(out.rows() * out.cols());
    for (std::size_t r = 0; r < table.rows(); ++r)
        for (std::size_t c : keep) out.matrix.push_back(table.at(r, c));
    return out;
}

void write_store(const FeatureTable& table, const std::filesystem::path& csv_path,
                 const std::filesystem::path& meta_path, const std::string& header_comment,
                 const std::vector<std::pair<std::string, std::string>>& units) {
    std::ostringstream out;
    out << header_comment;
    out << "date";
    for (const auto& col : table.columns) out << "," << dimension_char(col.dimension) << ":" << col.name;
    out << "\n";
    for (std::size_t r = 0; r < table.rows(); ++r) {
        out << table.dates[r].iso();
        for (std::size_t c = 0; c < table.cols(); ++c) {
            out << ",";
            const double v = table.at(r, c);
            if (!std::isnan(v)) out << csv::format_double(v);
        }
        out << "\n";
    }
    csv::write_file(csv_path, out.str());

    nlohmann::json meta;
    meta["target"] = table.target;
    meta["rows"] = table.rows();
    nlohmann::json cols = nlohmann::json::array();
    std::map<std::string, std::string> unit_map(units.begin(), units.end());
    for (const auto& col : table.columns) {
        nlohmann::json jc;
        jc["name"] = col.name;
        jc["dimension"] = std::string(1, dimension_char(col.dimension));
        auto it = unit_map.find(col.name);
        jc["unit"] = it == unit_map.end() ? "1" : it->second;
        cols.push_back(jc);
    }
    meta["columns"] = cols;
    std::string json_comment = header_comment;
    if (!json_comment.empty() && json_comment[0] == '#') json_comment = "//" + json_comment.substr(1);
    csv::write_file(meta_path, json_comment + meta.dump(2) + "\n");
}

FeatureTable read_store(const std::filesystem::path& csv_path, const std::filesystem::path& meta_path) {
    std::ifstream min(meta_path);
    if (!min) throw ValidationError("cannot open store meta: " + meta_path.string());
    nlohmann::json meta = nlohmann::json::parse(min, nullptr, true, /*ignore_comments=*/true);

    auto rows = csv::read_file(csv_path);
    if (rows.empty()) throw ValidationError("empty store: " + csv_path.string());
    const auto& header = rows[0].cells;
    if (header.empty() || header[0] != "date")
        throw ValidationError(csv_path.string() + ": store header must start with `date`");

    FeatureTable table;
    table.target = meta.at("target").get<std::string>();
    for (std::size_t c = 1; c < header.size(); ++c) {
        const auto& cell = header[c];
        const auto colon = cell.find(':');
        if (colon == std::string::npos || colon == 0)
            throw ValidationError(csv_path.string() + ": store column '" + cell + "' must be `DIM:name`");
        table.columns.push_back({cell.substr(colon + 1), parse_dimension(cell.substr(0, colon))});
    }

    table.matrix.reserve((rows.size() - 1) * table.cols());
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.cells.size() != header.size())
            throw ValidationError(csv_path.string() + ":" + std::to_string(row.line) + ": ragged row");
        Date date = Date::parse(row.cells[0]);
        if (!table.dates.empty() && !(table.dates.back() < date))
            throw ValidationError(csv_path.string() + ":" + std::to_string(row.line) + ": non-monotone dates");
        table.dates.push_back(date);
        for (std::size_t c = 1; c < row.cells.size(); ++c) {
            auto v = csv::parse_cell(row.cells[c]);
            table.matrix.push_back(v ? *v : kNaN);
        }
    }
    return table;
}

}  // namespace dfd::stdb

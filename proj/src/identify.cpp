#include "dfd/identify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "dfd/csv.hpp"
#include "dfd/errors.hpp"
#include "dfd/rng.hpp"

namespace dfd::identify {

namespace {

void check_groups(const std::vector<double>& baseline_row, const std::vector<std::vector<int>>& groups,
                  const std::vector<std::string>& group_names) {
    if (groups.empty()) throw ValidationError("grouped_shapley: no groups");
    if (groups.size() != group_names.size()) throw ValidationError("grouped_shapley: group/name count mismatch");
    std::vector<char> used(baseline_row.size(), 0);
    for (const auto& g : groups) {
        if (g.empty()) throw ValidationError("grouped_shapley: empty group");
        for (int idx : g) {
            if (idx < 0 || static_cast<std::size_t>(idx) >= baseline_row.size())
                throw ValidationError("grouped_shapley: column index out of range");
            if (used[idx]) throw ValidationError("grouped_shapley: column assigned to more than one group");
            used[idx] = 1;
        }
    }
}

void finish_summary(DimensionAttribution& attr) {
    const std::size_t g = attr.groups.size();
    attr.mean_abs.assign(g, 0.0);
    attr.sign_positive.assign(g, 0.0);
    if (attr.values.empty()) return;
    for (const auto& row : attr.values) {
        for (std::size_t i = 0; i < g; ++i) {
            attr.mean_abs[i] += std::abs(row[i]);
            if (row[i] > 0) attr.sign_positive[i] += 1.0;
        }
    }
    for (std::size_t i = 0; i < g; ++i) {
        attr.mean_abs[i] /= attr.values.size();
        attr.sign_positive[i] /= attr.values.size();
    }
}

}  // namespace

DimensionAttribution grouped_shapley(const PredictFn& model, const std::vector<std::vector<double>>& samples,
                                     const std::vector<double>& baseline_row,
                                     const std::vector<std::vector<int>>& groups,
                                     const std::vector<std::string>& group_names) {
    check_groups(baseline_row, groups, group_names);
    if (samples.empty()) throw ValidationError("grouped_shapley: no samples");
    const std::size_t g = groups.size();
    if (g > 8) throw ValidationError("grouped_shapley: more than 8 groups; use sampling variant");

    // Coalition weights |S|!(g-1-|S|)!/g! — identical to averaging marginal
    // contributions over every group permutation, at 2^g evaluations per sample.
    std::vector<double> weight(g);
    {
        std::vector<double> fact(g + 1, 1.0);
        for (std::size_t i = 1; i <= g; ++i) fact[i] = fact[i - 1] * i;
        for (std::size_t s = 0; s < g; ++s) weight[s] = fact[s] * fact[g - 1 - s] / fact[g];
    }

    DimensionAttribution attr;
    attr.groups = group_names;
    attr.baseline = model(baseline_row);

    const std::uint32_t full = (1u << g) - 1u;
    std::vector<double> value(full + 1);
    std::vector<double> blend;
    for (const auto& sample : samples) {
        if (sample.size() != baseline_row.size())
            throw ValidationError("grouped_shapley: sample width does not match baseline row");
        for (std::uint32_t mask = 0; mask <= full; ++mask) {
            if (mask == 0) {
                value[0] = attr.baseline;
                continue;
            }
            blend = baseline_row;
            for (std::size_t i = 0; i < g; ++i)
                if (mask & (1u << i))
                    for (int idx : groups[i]) blend[idx] = sample[idx];
            value[mask] = model(blend);
        }
        std::vector<double> phi(g, 0.0);
        for (std::uint32_t mask = 0; mask <= full; ++mask) {
            const int size = std::popcount(mask);
            for (std::size_t i = 0; i < g; ++i) {
                if (mask & (1u << i)) continue;
                phi[i] += weight[size] * (value[mask | (1u << i)] - value[mask]);
            }
        }
        attr.values.push_back(std::move(phi));
        attr.predictions.push_back(value[full]);
    }
    finish_summary(attr);
    return attr;
}

DimensionAttribution grouped_shapley_sampled(const PredictFn& model, const std::vector<std::vector<double>>& samples,
                                             const std::vector<double>& baseline_row,
                                             const std::vector<std::vector<int>>& groups,
                                             const std::vector<std::string>& group_names, int permutations,
                                             std::uint64_t seed) {
    check_groups(baseline_row, groups, group_names);
    if (samples.empty()) throw ValidationError("grouped_shapley_sampled: no samples");
    if (permutations < 1) throw ValidationError("grouped_shapley_sampled: permutations must be positive");
    const std::size_t g = groups.size();

    // One shared permutation set keeps results comparable across samples.
    Rng rng(seed);
    std::vector<std::vector<int>> perms(permutations);
    for (auto& perm : perms) {
        perm.resize(g);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = g; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
    }

    DimensionAttribution attr;
    attr.groups = group_names;
    attr.baseline = model(baseline_row);

    std::vector<double> blend;
    for (const auto& sample : samples) {
        if (sample.size() != baseline_row.size())
            throw ValidationError("grouped_shapley_sampled: sample width does not match baseline row");
        std::vector<double> phi(g, 0.0);
        double full_value = attr.baseline;
        for (const auto& perm : perms) {
            blend = baseline_row;
            double prev = attr.baseline;
            for (int gi : perm) {
                for (int idx : groups[gi]) blend[idx] = sample[idx];
                const double cur = model(blend);
                phi[gi] += cur - prev;
                prev = cur;
            }
            full_value = prev;  // same for every permutation
        }
        for (auto& p : phi) p /= permutations;
        attr.values.push_back(std::move(phi));
        attr.predictions.push_back(full_value);
    }
    finish_summary(attr);
    return attr;
}

std::vector<FeatureScore> variance_filter(const stdb::FeatureTable& table, double threshold) {
    if (!table.complete()) throw ValidationError("variance_filter: table has missing cells; impute first");
    const int ti = table.target_index();
    std::vector<FeatureScore> out;
    for (std::size_t c = 0; c < table.cols(); ++c) {
        if (static_cast<int>(c) == ti) continue;
        FeatureScore score;
        score.name = table.columns[c].name;
        score.dimension = table.columns[c].dimension;
        double mean = 0;
        for (std::size_t r = 0; r < table.rows(); ++r) mean += table.at(r, c);
        mean /= table.rows();
        double var = 0;
        for (std::size_t r = 0; r < table.rows(); ++r) {
            const double d = table.at(r, c) - mean;
            var += d * d;
        }
        score.variance = var / table.rows();
        score.passed_variance = score.variance >= threshold;
        out.push_back(std::move(score));
    }
    return out;
}

std::pair<double, double> f_score(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ValidationError("f_score: length mismatch");
    const std::size_t n = x.size();
    if (n < 3) throw ValidationError("f_score: needs at least 3 samples");

    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0 || syy == 0) throw ValidationError("f_score: zero variance input");
    double r = sxy / std::sqrt(sxx * syy);
    r = std::clamp(r, -1.0, 1.0);
    const double r2 = r * r;
    const double f = (1.0 - r2 < 1e-12) ? std::numeric_limits<double>::infinity()
                                        : r2 / (1.0 - r2) * static_cast<double>(n - 2);
    return {r, f};
}

std::vector<FeatureScore> select_features(std::vector<FeatureScore> scores, const stdb::FeatureTable& table,
                                          double threshold, int top_k) {
    const int ti = table.target_index();
    const std::vector<double> y = table.column_values(ti);
    for (auto& score : scores) {
        if (!score.passed_variance) continue;
        if (score.variance == 0) continue;  // constant column slipped through a zero threshold
        const int c = table.col_index(score.name);
        if (c < 0) throw ValidationError("select_features: column '" + score.name + "' not in table");
        const auto [r, f] = f_score(table.column_values(c), y);
        score.r = r;
        score.f = f;
    }
    std::sort(scores.begin(), scores.end(), [](const FeatureScore& a, const FeatureScore& b) {
        if (a.f != b.f) return a.f > b.f;
        return a.name < b.name;
    });
    if (top_k > 0) {
        int kept = 0;
        for (auto& score : scores)
            score.passed_kbest = score.passed_variance && score.variance > 0 && kept < top_k && (++kept, true);
    } else {
        for (auto& score : scores) score.passed_kbest = score.passed_variance && score.f >= threshold;
    }
    return scores;
}

LvkbResult lvkb(const stdb::FeatureTable& table, double variance_threshold, double kbest_threshold, int top_k) {
    LvkbResult result;
    result.variance_threshold = variance_threshold;
    result.kbest_threshold = kbest_threshold;
    result.scores = select_features(variance_filter(table, variance_threshold), table, kbest_threshold, top_k);
    for (const auto& score : result.scores) {
        result.counts.try_emplace(stdb::dimension_char(score.dimension), 0);
        if (score.passed_kbest) {
            result.identified.push_back(score.name);
            ++result.counts[stdb::dimension_char(score.dimension)];
        }
    }
    return result;
}

std::string attribution_to_csv(const DimensionAttribution& attr, const std::vector<std::string>& sample_ids,
                               const std::string& header_comment) {
    if (sample_ids.size() != attr.values.size())
        throw ValidationError("attribution_to_csv: sample id count mismatch");
    std::ostringstream out;
    out << header_comment;
    out << "# baseline=" << csv::format_double(attr.baseline) << "\n";
    out << "# mean_abs";
    for (std::size_t i = 0; i < attr.groups.size(); ++i)
        out << " " << attr.groups[i] << "=" << csv::format_double(attr.mean_abs[i]);
    out << "\n# sign_positive";
    for (std::size_t i = 0; i < attr.groups.size(); ++i)
        out << " " << attr.groups[i] << "=" << csv::format_double(attr.sign_positive[i]);
    out << "\nsample";
    for (const auto& name : attr.groups) out << "," << name;
    out << ",prediction\n";
    for (std::size_t s = 0; s < attr.values.size(); ++s) {
        out << sample_ids[s];
        for (double v : attr.values[s]) out << "," << csv::format_double(v);
        out << "," << csv::format_double(attr.predictions[s]) << "\n";
    }
    return out.str();
}

std::string scores_to_csv(const std::vector<FeatureScore>& scores, const std::string& header_comment,
                          double variance_threshold, double kbest_threshold) {
    std::ostringstream out;
    out << header_comment;
    out << "# variance_threshold=" << csv::format_double(variance_threshold)
        << " kbest_threshold=" << csv::format_double(kbest_threshold) << "\n";
    out << "name,dimension,variance,r,f,kept\n";
    for (const auto& s : scores) {
        out << s.name << "," << stdb::dimension_char(s.dimension) << "," << csv::format_double(s.variance) << ","
            << csv::format_double(s.r) << "," << csv::format_double(s.f) << "," << (s.passed_kbest ? 1 : 0) << "\n";
    }
    return out.str();
}

std::string counts_to_json(const LvkbResult& result, const std::string& header_comment) {
    nlohmann::json doc;
    doc["variance_threshold"] = result.variance_threshold;
    doc["kbest_threshold"] = result.kbest_threshold;
    doc["identified_total"] = result.identified.size();
    nlohmann::json by_dim = nlohmann::json::object();
    for (const auto& [dim, count] : result.counts) by_dim[std::string(1, dim)] = count;
    doc["by_dimension"] = by_dim;
    doc["identified"] = result.identified;
    return header_comment + doc.dump(2) + "\n";
}

}  // namespace dfd::identify

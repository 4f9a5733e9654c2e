#include "dfd/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "dfd/csv.hpp"
#include "dfd/errors.hpp"
#include "dfd/rng.hpp"
#include "dfd/svg.hpp"

namespace dfd::analyze {

stdb::FeatureTable dimension_aggregate(const stdb::FeatureTable& table) {
    if (!table.complete()) throw ValidationError("dimension_aggregate: table has missing cells");
    const int ti = table.target_index();

    const stdb::Dimension dims[] = {stdb::Dimension::G, stdb::Dimension::A, stdb::Dimension::I, stdb::Dimension::S};
    stdb::FeatureTable out;
    out.dates = table.dates;
    out.target = table.target;
    for (auto dim : dims) out.columns.push_back({std::string(1, stdb::dimension_char(dim)), dim});
    out.columns.push_back({table.target, stdb::Dimension::L});
    out.matrix.assign(out.rows() * out.cols(), 0.0);

    for (std::size_t di = 0; di < 4; ++di) {
        std::vector<std::size_t> members;
        for (std::size_t c = 0; c < table.cols(); ++c)
            if (table.columns[c].dimension == dims[di] && static_cast<int>(c) != ti) members.push_back(c);
        if (members.empty())
            throw ValidationError(std::string("dimension_aggregate: empty dimension ") +
                                  stdb::dimension_char(dims[di]));
        for (std::size_t c : members) {
            double mn = table.at(0, c), mx = mn;
            for (std::size_t r = 1; r < table.rows(); ++r) {
                mn = std::min(mn, table.at(r, c));
                mx = std::max(mx, table.at(r, c));
            }
            if (mx == mn)
                throw ValidationError("dimension_aggregate: zero range in min-max for '" + table.columns[c].name +
                                      "'; drop constant features first");
            for (std::size_t r = 0; r < table.rows(); ++r)
                out.at(r, di) += (table.at(r, c) - mn) / (mx - mn) / members.size();
        }
    }
    for (std::size_t r = 0; r < table.rows(); ++r) out.at(r, 4) = table.at(r, ti);
    return out;
}

namespace {

struct SobolEvals {
    std::vector<double> fA, fB;
    std::vector<std::vector<double>> fAB, fBA;  // per input
};

struct SobolPoint {
    std::vector<double> s1, st;
    std::vector<std::vector<double>> s2;
};

// Index estimates over a row subset (identity subset = full estimate; others = bootstrap).
SobolPoint estimate(const SobolEvals& ev, const std::vector<int>& rows) {
    const std::size_t d = ev.fAB.size();
    const std::size_t n = rows.size();
    double meanA = 0, meanB = 0;
    for (int k : rows) {
        meanA += ev.fA[k];
        meanB += ev.fB[k];
    }
    meanA /= n;
    meanB /= n;
    const double mean = (meanA + meanB) / 2;
    double var = 0;
    for (int k : rows) {
        var += (ev.fA[k] - mean) * (ev.fA[k] - mean);
        var += (ev.fB[k] - mean) * (ev.fB[k] - mean);
    }
    var /= 2 * n;
    if (var <= 0) throw ComputeError("sobol: constant model output");

    // Correlation-form (Janon) first-order estimate for one swap pair.
    const auto janon = [&](const std::vector<double>& g, const std::vector<double>& h) {
        double prod = 0, m = 0, sq = 0;
        for (int k : rows) {
            prod += g[k] * h[k];
            m += (g[k] + h[k]) / 2;
            sq += (g[k] * g[k] + h[k] * h[k]) / 2;
        }
        m /= n;
        const double den = sq / n - m * m;
        return den > 0 ? (prod / n - m * m) / den : 0.0;
    };

    SobolPoint pt;
    pt.s1.assign(d, 0.0);
    pt.st.assign(d, 0.0);
    pt.s2.assign(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) {
        // First order: average the correlation form (Janon) with the centered
        // difference form (Saltelli 2010), each over both swap directions.
        // The former is tight for large indices, the latter near zero, and
        // their finite-sample errors tend to cancel.
        double v1 = 0, v2 = 0, st1 = 0, st2 = 0;
        for (int k : rows) {
            v1 += (ev.fB[k] - mean) * (ev.fAB[i][k] - ev.fA[k]);
            v2 += (ev.fA[k] - mean) * (ev.fBA[i][k] - ev.fB[k]);
            st1 += (ev.fA[k] - ev.fAB[i][k]) * (ev.fA[k] - ev.fAB[i][k]);
            st2 += (ev.fB[k] - ev.fBA[i][k]) * (ev.fB[k] - ev.fBA[i][k]);
        }
        const double salt = (v1 + v2) / (2.0 * n) / var;
        const double jan = (janon(ev.fB, ev.fAB[i]) + janon(ev.fA, ev.fBA[i])) / 2;
        pt.s1[i] = (salt + jan) / 2;
        pt.st[i] = (st1 + st2) / (4.0 * n) / var;  // Jansen, both directions
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            // Closed pair variance by the Jansen difference: fAB_j and fBA_i
            // agree on columns i and j, so the squared gap estimates the
            // complement's share of the variance.
            double gap1 = 0, gap2 = 0;
            for (int k : rows) {
                const double d1 = ev.fAB[j][k] - ev.fBA[i][k];
                const double d2 = ev.fAB[i][k] - ev.fBA[j][k];
                gap1 += d1 * d1;
                gap2 += d2 * d2;
            }
            const double vc = var - (gap1 + gap2) / (4.0 * n);
            pt.s2[i][j] = vc / var - pt.s1[i] - pt.s1[j];
        }
    }
    return pt;
}

double half_width(std::vector<double>& samples) {
    std::sort(samples.begin(), samples.end());
    auto quantile = [&](double q) {
        const double pos = q * (samples.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const double frac = pos - lo;
        return lo + 1 < samples.size() ? samples[lo] * (1 - frac) + samples[lo + 1] * frac : samples[lo];
    };
    return (quantile(0.975) - quantile(0.025)) / 2;
}

}  // namespace

SobolReport sobol_indices(const ModelFn& fn, const std::vector<std::pair<double, double>>& bounds,
                          const std::vector<std::string>& names, int n, std::uint64_t seed) {
    const std::size_t d = bounds.size();
    if (d == 0) throw ValidationError("sobol: no inputs");
    if (names.size() != d) throw ValidationError("sobol: name/bounds count mismatch");
    if (n < 100) throw ValidationError("sobol: sample budget too small (n >= 100)");
    for (const auto& [lo, hi] : bounds)
        if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
            throw ValidationError("sobol: bounds must be finite with lo < hi");

    Rng rng(seed);
    std::vector<double> A(n * d), B(n * d);
    for (int k = 0; k < n; ++k)
        for (std::size_t j = 0; j < d; ++j) A[k * d + j] = rng.uniform(bounds[j].first, bounds[j].second);
    for (int k = 0; k < n; ++k)
        for (std::size_t j = 0; j < d; ++j) B[k * d + j] = rng.uniform(bounds[j].first, bounds[j].second);

    SobolEvals ev;
    ev.fA.resize(n);
    ev.fB.resize(n);
    ev.fAB.assign(d, std::vector<double>(n));
    ev.fBA.assign(d, std::vector<double>(n));
    std::vector<double> x(d);
    for (int k = 0; k < n; ++k) {
        x.assign(A.begin() + k * d, A.begin() + (k + 1) * d);
        ev.fA[k] = fn(x);
        x.assign(B.begin() + k * d, B.begin() + (k + 1) * d);
        ev.fB[k] = fn(x);
        for (std::size_t i = 0; i < d; ++i) {
            x.assign(A.begin() + k * d, A.begin() + (k + 1) * d);
            x[i] = B[k * d + i];
            ev.fAB[i][k] = fn(x);
            x.assign(B.begin() + k * d, B.begin() + (k + 1) * d);
            x[i] = A[k * d + i];
            ev.fBA[i][k] = fn(x);
        }
    }

    std::vector<int> all(n);
    for (int k = 0; k < n; ++k) all[k] = k;
    const SobolPoint full = estimate(ev, all);

    constexpr int kResamples = 100;
    std::vector<std::vector<double>> s1_bs(d), st_bs(d);
    std::vector<std::vector<std::vector<double>>> s2_bs(d, std::vector<std::vector<double>>(d));
    std::vector<int> rows(n);
    for (int b = 0; b < kResamples; ++b) {
        for (int k = 0; k < n; ++k) rows[k] = static_cast<int>(rng.index(n));
        const SobolPoint pt = estimate(ev, rows);
        for (std::size_t i = 0; i < d; ++i) {
            s1_bs[i].push_back(pt.s1[i]);
            st_bs[i].push_back(pt.st[i]);
            for (std::size_t j = i + 1; j < d; ++j) s2_bs[i][j].push_back(pt.s2[i][j]);
        }
    }

    SobolReport report;
    report.names = names;
    report.n = n;
    report.seed = seed;
    report.s1 = full.s1;
    report.st = full.st;
    report.s2 = full.s2;
    report.s1_conf.resize(d);
    report.st_conf.resize(d);
    report.s2_conf.assign(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) {
        report.s1_conf[i] = half_width(s1_bs[i]);
        report.st_conf[i] = half_width(st_bs[i]);
        for (std::size_t j = i + 1; j < d; ++j) report.s2_conf[i][j] = half_width(s2_bs[i][j]);
    }
    return report;
}

PDPCurve partial_dependence(const models::TrainedModel& model, const stdb::FeatureTable& train,
                            const std::string& feature, int grid_size) {
    if (grid_size < 2) throw ValidationError("partial_dependence: grid_size must be >= 2");
    bool is_input = false;
    for (const auto& col : model.columns) is_input |= col.name == feature;
    if (!is_input) throw ValidationError("partial_dependence: '" + feature + "' is not a model input");
    const int fc = train.col_index(feature);
    if (fc < 0) throw ValidationError("partial_dependence: '" + feature + "' not in table");

    double mn = train.at(0, fc), mx = mn;
    for (std::size_t r = 1; r < train.rows(); ++r) {
        mn = std::min(mn, train.at(r, fc));
        mx = std::max(mx, train.at(r, fc));
    }
    if (mx == mn) throw ValidationError("partial_dependence: degenerate grid (constant feature)");

    PDPCurve curve;
    curve.feature = feature;
    curve.n = train.rows();
    stdb::FeatureTable forced = train;
    for (int g = 0; g < grid_size; ++g) {
        const double value = mn + (mx - mn) * g / (grid_size - 1);
        curve.grid.push_back(value);
        for (std::size_t r = 0; r < forced.rows(); ++r) forced.at(r, fc) = value;
        const std::vector<double> pred = model.predict(forced);
        double mean = 0;
        for (double p : pred) mean += p;
        curve.pd.push_back(mean / pred.size());
    }
    return curve;
}

LagReport lag_correlation(const std::vector<double>& x, const std::vector<double>& y, int max_lag,
                          const std::string& name) {
    if (x.size() != y.size()) throw ValidationError("lag_correlation: length mismatch");
    if (max_lag < 1) throw ValidationError("lag_correlation: max_lag must be positive");
    if (x.size() <= static_cast<std::size_t>(max_lag) + 30)
        throw ValidationError("lag_correlation: series too short for max_lag");

    LagReport report;
    report.feature = name;
    for (int k = 0; k <= max_lag; ++k) {
        const std::size_t n = x.size() - k;
        double mx = 0, my = 0;
        for (std::size_t t = k; t < x.size(); ++t) {
            mx += x[t - k];
            my += y[t];
        }
        mx /= n;
        my /= n;
        double sxy = 0, sxx = 0, syy = 0;
        for (std::size_t t = k; t < x.size(); ++t) {
            const double dx = x[t - k] - mx, dy = y[t] - my;
            sxy += dx * dy;
            sxx += dx * dx;
            syy += dy * dy;
        }
        if (sxx == 0 || syy == 0) throw ValidationError("lag_correlation: constant series");
        report.correlations.push_back(sxy / std::sqrt(sxx * syy));
    }
    report.best_lag = 0;
    report.best_r = report.correlations[0];
    for (int k = 1; k <= max_lag; ++k) {
        if (std::abs(report.correlations[k]) > std::abs(report.best_r)) {
            report.best_lag = k;
            report.best_r = report.correlations[k];
        }
    }
    return report;
}

std::string sobol_to_csv(const SobolReport& report, const std::string& header_comment) {
    std::ostringstream out;
    out << header_comment;
    out << "# n=" << report.n << " seed=" << report.seed << " resamples=100 level=0.95\n";
    out << "Tasks,ST,S1,S2,STconf,S1conf,S2conf\n";
    const std::size_t d = report.names.size();
    for (std::size_t i = 0; i < d; ++i) {
        out << report.names[i] << "," << csv::format_double(report.st[i]) << "," << csv::format_double(report.s1[i])
            << ",non," << csv::format_double(report.st_conf[i]) << "," << csv::format_double(report.s1_conf[i])
            << ",non\n";
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            out << report.names[i] << "*" << report.names[j] << ",non,non," << csv::format_double(report.s2[i][j])
                << ",non,non," << csv::format_double(report.s2_conf[i][j]) << "\n";
        }
    }
    return out.str();
}

std::string pdp_to_csv(const PDPCurve& curve, const std::string& header_comment) {
    std::ostringstream out;
    out << header_comment;
    out << "# feature=" << curve.feature << " rows_averaged=" << curve.n << "\n";
    out << "grid,pd\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i)
        out << csv::format_double(curve.grid[i]) << "," << csv::format_double(curve.pd[i]) << "\n";
    return out.str();
}

std::string pdp_to_svg(const PDPCurve& curve, const std::string& header_comment) {
    const double width = 520, height = 340, left = 70, right = 24, top = 28, bottom = 46;
    double mn = curve.pd[0], mx = curve.pd[0];
    for (double v : curve.pd) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    if (mx == mn) {
        mn -= 1;
        mx += 1;
    }
    const double pad = (mx - mn) * 0.08;
    mn -= pad;
    mx += pad;

    svg::Doc doc(width, height, header_comment);
    doc.text(left, top - 10, "partial dependence: " + curve.feature, 13, "start", "#222222");
    const svg::Scale sx{curve.grid.front(), curve.grid.back(), left, width - right};
    const svg::Scale sy{mn, mx, height - bottom, top};
    for (int t = 0; t <= 4; ++t) {
        const double v = mn + (mx - mn) * t / 4;
        doc.line(left, sy(v), width - right, sy(v), t == 0 ? "#555555" : "#dddddd", 1);
        char label[32];
        std::snprintf(label, sizeof(label), "%.3g", v);
        doc.text(left - 6, sy(v) + 4, label, 11, "end", "#333333");
    }
    for (int t = 0; t <= 4; ++t) {
        const double v = curve.grid.front() + (curve.grid.back() - curve.grid.front()) * t / 4;
        char label[32];
        std::snprintf(label, sizeof(label), "%.3g", v);
        doc.text(sx(v), height - bottom + 18, label, 11, "middle", "#333333");
    }
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < curve.grid.size(); ++i) pts.emplace_back(sx(curve.grid[i]), sy(curve.pd[i]));
    doc.polyline(pts, "#b65c54", 2);
    return doc.str();
}

std::string lags_to_csv(const std::vector<LagReport>& reports, const std::string& header_comment) {
    std::ostringstream out;
    out << header_comment;
    for (const auto& r : reports)
        out << "# feature=" << r.feature << " best_lag=" << r.best_lag << " best_r=" << csv::format_double(r.best_r)
            << "\n";
    out << "feature,lag,r,is_best\n";
    for (const auto& r : reports) {
        for (std::size_t k = 0; k < r.correlations.size(); ++k) {
            out << r.feature << "," << k << "," << csv::format_double(r.correlations[k]) << ","
                << (static_cast<int>(k) == r.best_lag ? 1 : 0) << "\n";
        }
    }
    return out.str();
}

namespace {

std::string lerp_color(double t) {
    // low = cool blue, high = warm red
    const int c0[3] = {59, 111, 182}, c1[3] = {214, 96, 77};
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(c0[0] + (c1[0] - c0[0]) * t),
                  static_cast<int>(c0[1] + (c1[1] - c0[1]) * t), static_cast<int>(c0[2] + (c1[2] - c0[2]) * t));
    return buf;
}

}  // namespace

BeeswarmFiles beeswarm_export(const identify::DimensionAttribution& attr,
                              const std::vector<std::vector<double>>& feature_values,
                              const std::vector<std::string>& sample_ids, std::uint64_t seed,
                              const std::string& header_comment) {
    if (attr.values.empty()) throw ValidationError("beeswarm_export: empty attribution matrix");
    if (feature_values.size() != attr.values.size() || sample_ids.size() != attr.values.size())
        throw ValidationError("beeswarm_export: sample count mismatch");
    const std::size_t g = attr.groups.size();

    std::ostringstream csv_out;
    csv_out << header_comment;
    csv_out << "sample,name,value,feature_value\n";
    for (std::size_t s = 0; s < attr.values.size(); ++s) {
        for (std::size_t i = 0; i < g; ++i) {
            csv_out << sample_ids[s] << "," << attr.groups[i] << "," << csv::format_double(attr.values[s][i]) << ","
                    << csv::format_double(feature_values[s][i]) << "\n";
        }
    }

    double mx = 0;
    for (const auto& row : attr.values)
        for (double v : row) mx = std::max(mx, std::abs(v));
    if (mx == 0) mx = 1;
    std::vector<double> fmin(g, std::numeric_limits<double>::infinity()), fmax(g, -std::numeric_limits<double>::infinity());
    for (const auto& row : feature_values)
        for (std::size_t i = 0; i < g; ++i) {
            fmin[i] = std::min(fmin[i], row[i]);
            fmax[i] = std::max(fmax[i], row[i]);
        }

    const double left = 90, right = 30, top = 34, row_h = 56;
    const double width = 640, height = top + row_h * g + 30;
    svg::Doc doc(width, height, header_comment);
    doc.text(left, top - 12, "attribution beeswarm (color = group value, blue low / red high)", 12, "start", "#222222");
    const svg::Scale sx{-mx * 1.05, mx * 1.05, left, width - right};
    doc.line(sx(0), top, sx(0), height - 24, "#888888", 1);

    Rng rng(seed);
    for (std::size_t i = 0; i < g; ++i) {
        const double cy = top + row_h * i + row_h / 2;
        doc.text(left - 8, cy + 4, attr.groups[i], 12, "end", "#222222");
        doc.line(left, cy, width - right, cy, "#eeeeee", 1);
        for (std::size_t s = 0; s < attr.values.size(); ++s) {
            const double jitter = rng.uniform(-row_h * 0.32, row_h * 0.32);
            const double t = fmax[i] > fmin[i] ? (feature_values[s][i] - fmin[i]) / (fmax[i] - fmin[i]) : 0.5;
            doc.circle(sx(attr.values[s][i]), cy + jitter, 2.4, lerp_color(t));
        }
    }
    return {csv_out.str(), doc.str()};
}

}  // namespace dfd::analyze

#include "dfd/models.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "dfd/csv.hpp"
#include "dfd/errors.hpp"
#include "dfd/svg.hpp"

namespace dfd::models {

Kind parse_kind(const std::string& name) {
    if (name == "ridge") return Kind::ridge;
    if (name == "gbrt") return Kind::gbrt;
    if (name == "mlp") return Kind::mlp;
    throw ValidationError("unknown model kind '" + name + "' (expected ridge, gbrt, or mlp)");
}

std::string kind_name(Kind kind) {
    switch (kind) {
        case Kind::ridge: return "ridge";
        case Kind::gbrt: return "gbrt";
        case Kind::mlp: return "mlp";
    }
    return "?";
}

void MinMaxScaler::fit(const std::vector<double>& X, std::size_t n, std::size_t d) {
    lo.assign(d, 0.0);
    range.assign(d, 0.0);
    for (std::size_t c = 0; c < d; ++c) {
        double mn = X[c], mx = X[c];
        for (std::size_t r = 1; r < n; ++r) {
            mn = std::min(mn, X[r * d + c]);
            mx = std::max(mx, X[r * d + c]);
        }
        lo[c] = mn;
        range[c] = mx - mn;
    }
}

void MinMaxScaler::transform_row(const double* raw, double* scaled) const {
    for (std::size_t c = 0; c < lo.size(); ++c)
        scaled[c] = range[c] == 0.0 ? 0.0 : (raw[c] - lo[c]) / range[c];
}

namespace {

void validate_spec(const ModelSpec& spec) {
    switch (spec.kind) {
        case Kind::ridge:
            if (!(spec.lambda > 0)) throw ValidationError("ridge lambda must be positive");
            break;
        case Kind::gbrt:
            if (spec.gbrt.trees < 1 || spec.gbrt.depth < 1 || spec.gbrt.min_leaf < 1 ||
                !(spec.gbrt.learning_rate > 0))
                throw ValidationError("gbrt hyperparameters must be positive");
            break;
        case Kind::mlp:
            if (spec.mlp.hidden < 1 || spec.mlp.epochs < 1 || !(spec.mlp.learning_rate > 0))
                throw ValidationError("mlp hyperparameters must be positive");
            break;
    }
}

RidgeFit fit_ridge(const std::vector<double>& X, std::size_t n, std::size_t d, const std::vector<double>& y,
                   double lambda, std::vector<double>& mse_out) {
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> Xm(X.data(), n, d);
    Eigen::Map<const Eigen::VectorXd> ym(y.data(), n);

    const Eigen::RowVectorXd x_mean = Xm.colwise().mean();
    const double y_mean = ym.mean();
    const Eigen::MatrixXd Xc = Xm.rowwise() - x_mean;
    const Eigen::VectorXd yc = ym.array() - y_mean;

    Eigen::MatrixXd gram = Xc.transpose() * Xc;
    gram.diagonal().array() += lambda;
    const Eigen::VectorXd beta = gram.ldlt().solve(Xc.transpose() * yc);

    RidgeFit fit;
    fit.beta.assign(beta.data(), beta.data() + d);
    fit.intercept = y_mean - x_mean * beta;

    mse_out.push_back(yc.squaredNorm() / n);  // mean predictor
    mse_out.push_back((yc - Xc * beta).squaredNorm() / n);
    return fit;
}

}  // namespace

TrainedModel fit(const ModelSpec& spec, const stdb::FeatureTable& train) {
    validate_spec(spec);
    if (train.rows() < 50) throw ValidationError("fit: needs at least 50 training rows");
    const int ti = train.target_index();

    TrainedModel model;
    model.spec = spec;
    model.target = train.target;
    model.train_begin = train.dates.front();
    model.train_end = train.dates.back();
    for (std::size_t c = 0; c < train.cols(); ++c)
        if (static_cast<int>(c) != ti) model.columns.push_back(train.columns[c]);

    const std::size_t n = train.rows();
    const std::size_t d = model.columns.size();
    std::vector<double> X(n * d), y(n);
    for (std::size_t r = 0; r < n; ++r) {
        std::size_t k = 0;
        for (std::size_t c = 0; c < train.cols(); ++c) {
            const double v = train.at(r, c);
            if (!std::isfinite(v))
                throw ValidationError("fit: non-finite value in column '" + train.columns[c].name + "' on " +
                                      train.dates[r].iso());
            if (static_cast<int>(c) == ti)
                y[r] = v;
            else
                X[r * d + k++] = v;
        }
    }

    model.scaler.fit(X, n, d);
    std::vector<double> Xs(n * d);
    for (std::size_t r = 0; r < n; ++r) model.scaler.transform_row(&X[r * d], &Xs[r * d]);

    switch (spec.kind) {
        case Kind::ridge:
            model.ridge = fit_ridge(Xs, n, d, y, spec.lambda, model.train_mse);
            break;
        case Kind::gbrt: {
            model.gbrt = fit_gbrt(Xs, n, d, y, spec.gbrt);
            double var = 0, mean = 0;
            for (double v : y) mean += v;
            mean /= n;
            for (double v : y) var += (v - mean) * (v - mean);
            model.train_mse.push_back(var / n);
            model.train_mse.insert(model.train_mse.end(), model.gbrt.staged_train_mse.begin(),
                                   model.gbrt.staged_train_mse.end());
            break;
        }
        case Kind::mlp: {
            double mean = 0, var = 0;
            for (double v : y) mean += v;
            mean /= n;
            for (double v : y) var += (v - mean) * (v - mean);
            var /= n;
            model.y_mean = mean;
            model.y_sd = var > 0 ? std::sqrt(var) : 1.0;
            std::vector<double> ys(n);
            for (std::size_t r = 0; r < n; ++r) ys[r] = (y[r] - model.y_mean) / model.y_sd;
            MlpFit fit = fit_mlp(Xs, n, d, ys, spec.mlp, spec.seed);
            model.mlp = std::move(fit.net);
            model.train_mse = std::move(fit.epoch_mse);
            break;
        }
    }
    return model;
}

double TrainedModel::predict_row(const std::vector<double>& raw) const {
    if (raw.size() != columns.size()) throw ValidationError("predict: row width mismatch");
    std::vector<double> scaled(raw.size());
    scaler.transform_row(raw.data(), scaled.data());
    switch (spec.kind) {
        case Kind::ridge: {
            double out = ridge.intercept;
            for (std::size_t c = 0; c < scaled.size(); ++c) out += ridge.beta[c] * scaled[c];
            return out;
        }
        case Kind::gbrt:
            return gbrt.predict(scaled.data());
        case Kind::mlp:
            return mlp.forward(scaled.data()) * y_sd + y_mean;
    }
    return 0;
}

std::vector<double> TrainedModel::predict(const stdb::FeatureTable& rows) const {
    std::vector<int> source(columns.size(), -1);
    std::vector<std::string> missing;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        source[c] = rows.col_index(columns[c].name);
        if (source[c] < 0) missing.push_back(columns[c].name);
    }
    std::vector<std::string> extra;
    for (const auto& col : rows.columns) {
        if (col.name == target) continue;
        bool known = false;
        for (const auto& want : columns)
            if (want.name == col.name) known = true;
        if (!known) extra.push_back(col.name);
    }
    if (!missing.empty() || !extra.empty()) {
        std::ostringstream msg;
        msg << "predict: column mismatch;";
        if (!missing.empty()) {
            msg << " missing:";
            for (const auto& name : missing) msg << " " << name;
        }
        if (!extra.empty()) {
            msg << " extra:";
            for (const auto& name : extra) msg << " " << name;
        }
        throw ValidationError(msg.str());
    }

    std::vector<double> out;
    out.reserve(rows.rows());
    std::vector<double> raw(columns.size());
    for (std::size_t r = 0; r < rows.rows(); ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            raw[c] = rows.at(r, source[c]);
            if (std::isnan(raw[c]))
                throw ValidationError("predict: missing value in column '" + columns[c].name + "' on " +
                                      rows.dates[r].iso());
        }
        out.push_back(predict_row(raw));
    }
    return out;
}

Metrics evaluate(const std::vector<double>& y_true, const std::vector<double>& y_pred) {
    if (y_true.size() != y_pred.size()) throw ValidationError("evaluate: length mismatch");
    if (y_true.empty()) throw ValidationError("evaluate: empty input");
    Metrics m;
    m.n = y_true.size();
    double ape = 0, se = 0, ae = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == 0) throw ValidationError("evaluate: MAPE undefined (true value is 0)");
        const double e = y_pred[i] - y_true[i];
        ape += std::abs(e / y_true[i]);
        se += e * e;
        ae += std::abs(e);
    }
    m.mape = 100.0 * ape / m.n;
    m.rmse = std::sqrt(se / m.n);
    m.mae = ae / m.n;
    return m;
}

const ComparisonEntry& ComparisonReport::at(const std::string& scheme, const std::string& model) const {
    for (const auto& e : entries)
        if (e.scheme == scheme && e.model == model) return e;
    throw ComputeError("comparison entry not found: " + scheme + "/" + model);
}

ComparisonReport compare_schemes(const stdb::FeatureTable& table, const std::vector<stdb::SchemeSpec>& schemes,
                                 const std::vector<ModelSpec>& specs, const stdb::DateRange& train,
                                 const stdb::DateRange& test) {
    if (schemes.empty()) throw ValidationError("compare_schemes: no schemes");
    if (specs.empty()) throw ValidationError("compare_schemes: no model specs");

    ComparisonReport report;
    for (const auto& s : schemes) report.schemes.push_back(s.id);
    for (const auto& m : specs) report.models.push_back(kind_name(m.kind));

    for (const auto& scheme : schemes) {
        const stdb::FeatureTable subset = stdb::build_scheme(table, scheme);
        auto [train_part, test_part] = stdb::split(subset, train, test);
        const std::vector<double> y_true = test_part.column_values(test_part.target_index());
        for (const auto& spec : specs) {
            const TrainedModel model = fit(spec, train_part);
            ComparisonEntry entry;
            entry.scheme = scheme.id;
            entry.model = kind_name(spec.kind);
            entry.metrics = evaluate(y_true, model.predict(test_part));
            report.entries.push_back(std::move(entry));
        }
    }

    for (auto& entry : report.entries) {
        const double first = report.at(report.schemes.front(), entry.model).metrics.mape;
        entry.mape_gain_vs_first = first > 0 ? 100.0 * (first - entry.metrics.mape) / first : 0.0;
        double best_other = std::numeric_limits<double>::infinity();
        for (const auto& scheme : report.schemes) {
            if (scheme == entry.scheme) continue;
            best_other = std::min(best_other, report.at(scheme, entry.model).metrics.mape);
        }
        entry.mape_gain_vs_best_other =
            std::isfinite(best_other) && best_other > 0 ? 100.0 * (best_other - entry.metrics.mape) / best_other : 0.0;
    }
    return report;
}

std::string comparison_to_csv(const ComparisonReport& report, const std::string& header_comment) {
    std::ostringstream out;
    out << header_comment;
    out << "scheme,model,mape,rmse,mae,n,mape_gain_vs_" << report.schemes.front() << ",mape_gain_vs_best_other\n";
    for (const auto& e : report.entries) {
        out << e.scheme << "," << e.model << "," << csv::format_double(e.metrics.mape) << ","
            << csv::format_double(e.metrics.rmse) << "," << csv::format_double(e.metrics.mae) << "," << e.metrics.n
            << "," << csv::format_double(e.mape_gain_vs_first) << "," << csv::format_double(e.mape_gain_vs_best_other)
            << "\n";
    }
    return out.str();
}

std::string comparison_to_svg(const ComparisonReport& report, const std::string& header_comment) {
    static const char* kPalette[] = {"#4878a8", "#e49444", "#5ba053", "#b65c54", "#8268a8"};
    const std::size_t ns = report.schemes.size();
    const std::size_t nm = report.models.size();

    double max_mape = 0;
    for (const auto& e : report.entries) max_mape = std::max(max_mape, e.metrics.mape);
    if (max_mape <= 0) max_mape = 1;

    const double left = 70, right = 120, top = 30, bottom = 48;
    const double group_w = 36.0 * nm + 28.0;
    const double width = left + right + group_w * ns;
    const double height = 360;
    const double plot_h = height - top - bottom;

    svg::Doc doc(width, height, header_comment);
    doc.text(left, top - 12, "test MAPE (%) by scheme and model", 13, "start", "#222222");

    // y axis with 5 ticks
    for (int t = 0; t <= 5; ++t) {
        const double frac = t / 5.0;
        const double y = top + plot_h * (1 - frac);
        doc.line(left, y, width - right, y, t == 0 ? "#555555" : "#dddddd", 1);
        char label[32];
        std::snprintf(label, sizeof(label), "%.2f", max_mape * 1.1 * frac);
        doc.text(left - 6, y + 4, label, 11, "end", "#333333");
    }

    for (std::size_t s = 0; s < ns; ++s) {
        const double gx = left + group_w * s + 14;
        for (std::size_t m = 0; m < nm; ++m) {
            const auto& e = report.at(report.schemes[s], report.models[m]);
            const double h = plot_h * e.metrics.mape / (max_mape * 1.1);
            doc.rect(gx + 36.0 * m + 2, top + plot_h - h, 32, h, kPalette[m % 5]);
        }
        doc.text(gx + 36.0 * nm / 2, height - bottom + 18, report.schemes[s], 12, "middle", "#222222");
    }

    for (std::size_t m = 0; m < nm; ++m) {
        const double y = top + 16.0 * m;
        doc.rect(width - right + 14, y, 12, 12, kPalette[m % 5]);
        doc.text(width - right + 30, y + 10, report.models[m], 11, "start", "#222222");
    }
    return doc.str();
}

}  // namespace dfd::models

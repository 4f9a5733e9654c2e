#include "dfd/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "dfd/analyze.hpp"
#include "dfd/artifacts.hpp"
#include "dfd/cluster.hpp"
#include "dfd/corpus.hpp"
#include "dfd/csv.hpp"
#include "dfd/errors.hpp"
#include "dfd/identify.hpp"
#include "dfd/models.hpp"
#include "dfd/stdb.hpp"
#include "dfd/svg.hpp"
#include "dfd/synth.hpp"

namespace dfd::pipeline {

namespace {

using nlohmann::json;

// Dotted-path lookup that names the offending key on failure.
const json& need(const json& root, const std::string& dotted) {
    const json* cur = &root;
    std::size_t pos = 0;
    while (pos <= dotted.size()) {
        const std::size_t dot = dotted.find('.', pos);
        const std::string key = dotted.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
        if (!cur->is_object() || !cur->contains(key))
            throw ValidationError("missing config key: " + dotted);
        cur = &(*cur)[key];
        if (dot == std::string::npos) break;
        pos = dot + 1;
    }
    return *cur;
}

json get_or(const json& root, const std::string& dotted, json fallback) {
    try {
        return need(root, dotted);
    } catch (const ValidationError&) {
        return fallback;
    }
}

stdb::DateRange parse_range(const json& pair, const std::string& key) {
    if (!pair.is_array() || pair.size() != 2)
        throw ValidationError("config key " + key + " must be [begin, end]");
    return {Date::parse(pair[0].get<std::string>()), Date::parse(pair[1].get<std::string>())};
}

models::ModelSpec parse_model_spec(const json& j, std::uint64_t seed) {
    models::ModelSpec spec;
    spec.kind = models::parse_kind(j.at("kind").get<std::string>());
    spec.seed = seed;
    spec.lambda = j.value("lambda", spec.lambda);
    spec.gbrt.trees = j.value("trees", spec.gbrt.trees);
    spec.gbrt.depth = j.value("depth", spec.gbrt.depth);
    spec.gbrt.learning_rate = j.value("learning_rate", spec.gbrt.learning_rate);
    spec.gbrt.min_leaf = j.value("min_leaf", spec.gbrt.min_leaf);
    spec.mlp.hidden = j.value("hidden", spec.mlp.hidden);
    spec.mlp.epochs = j.value("epochs", spec.mlp.epochs);
    if (spec.kind == models::Kind::mlp) spec.mlp.learning_rate = j.value("learning_rate", spec.mlp.learning_rate);
    return spec;
}

// Finds the configured spec for a kind, falling back to defaults.
models::ModelSpec spec_for_kind(const Context& ctx, const std::string& kind_name) {
    const json list = get_or(ctx.config, "models", json::array());
    for (const auto& entry : list)
        if (entry.value("kind", "") == kind_name) return parse_model_spec(entry, ctx.seed);
    json stub;
    stub["kind"] = kind_name;
    return parse_model_spec(stub, ctx.seed);
}

std::filesystem::path store_csv_path(const Context& ctx) {
    const json j = get_or(ctx.config, "store.csv", json());
    return j.is_string() ? ctx.resolve(j.get<std::string>()) : ctx.out_dir / "4dmstd.csv";
}

std::filesystem::path store_meta_path(const Context& ctx) {
    const json j = get_or(ctx.config, "store.meta", json());
    return j.is_string() ? ctx.resolve(j.get<std::string>()) : ctx.out_dir / "4dmstd.meta.json";
}

stdb::FeatureTable load_store(const Context& ctx) {
    return stdb::read_store(store_csv_path(ctx), store_meta_path(ctx));
}

std::vector<std::pair<std::string, std::string>> read_units(const std::filesystem::path& meta_path) {
    std::vector<std::pair<std::string, std::string>> units;
    std::ifstream in(meta_path);
    if (!in) return units;
    const json meta = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    for (const auto& col : meta.value("columns", json::array()))
        units.emplace_back(col.value("name", ""), col.value("unit", "1"));
    return units;
}

struct CorpusArtifacts {
    corpus::CooccurrenceStats stats;
    corpus::DcwRanking ranking;
};

CorpusArtifacts score_corpus(const Context& ctx) {
    const std::string dir = need(ctx.config, "corpus.dir").get<std::string>();
    std::set<std::string> stopwords;
    const json stop = get_or(ctx.config, "corpus.stopwords", json());
    if (stop.is_string()) stopwords = corpus::load_stopwords(ctx.resolve(stop.get<std::string>()));
    const auto docs = corpus::load_directory(ctx.resolve(dir), stopwords);

    CorpusArtifacts art{corpus::build_stats(docs, get_or(ctx.config, "corpus.window", 10).get<int>()), {}};
    art.ranking = corpus::rank_features(art.stats, need(ctx.config, "corpus.anchor").get<std::string>(),
                                        get_or(ctx.config, "corpus.dcw_threshold", 0.1).get<double>());
    return art;
}

std::vector<int> config_lags(const Context& ctx) {
    std::vector<int> lags;
    for (const auto& v : get_or(ctx.config, "lags", json::array({1, 2, 3, 4, 5, 6, 7}))) lags.push_back(v.get<int>());
    return lags;
}

identify::LvkbResult run_lvkb(const Context& ctx, const stdb::FeatureTable& table) {
    return identify::lvkb(table, get_or(ctx.config, "identify.variance_threshold", 0.88).get<double>(),
                          get_or(ctx.config, "identify.kbest_threshold", 10.0).get<double>(),
                          get_or(ctx.config, "identify.top_k", 0).get<int>());
}

std::vector<stdb::SchemeSpec> resolve_schemes(const Context& ctx, const stdb::FeatureTable& store,
                                              const std::vector<int>& lags) {
    const json& list = need(ctx.config, "schemes");
    if (!list.is_array() || list.empty()) throw ValidationError("config key schemes must be a non-empty array");

    std::vector<std::string> identified;  // resolved lazily, once
    bool have_identified = false;

    std::vector<stdb::SchemeSpec> out;
    for (const auto& entry : list) {
        stdb::SchemeSpec spec;
        spec.id = entry.at("id").get<std::string>();
        std::set<std::string> seen;
        auto add = [&](const std::string& name) {
            if (seen.insert(name).second) spec.included.push_back(name);
        };
        for (const auto& item : entry.at("features")) {
            const std::string name = item.get<std::string>();
            if (name == "@load_lags") {
                for (int lag : lags) add(store.target + "_lag_" + std::to_string(lag));
            } else if (name == "@date_coeffs") {
                for (const auto& dc : stdb::date_coefficient_names()) add(dc);
            } else if (name == "@identified") {
                if (!have_identified) {
                    identified = run_lvkb(ctx, store).identified;
                    have_identified = true;
                }
                for (const auto& f : identified) add(f);
            } else {
                add(name);
            }
        }
        out.push_back(std::move(spec));
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& content) { csv::write_file(path, content); }

std::string html_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&')
            out += "&amp;";
        else if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else
            out += c;
    }
    return out;
}

}  // namespace

std::string Context::csv_header() const { return artifacts::csv_header(config_hash, seed); }
std::string Context::json_header() const { return artifacts::json_header(config_hash, seed); }
std::string Context::svg_header() const { return artifacts::header_line(config_hash, seed); }

std::filesystem::path Context::resolve(const std::string& path) const {
    const std::filesystem::path p(path);
    return p.is_absolute() ? p : config_dir / p;
}

const nlohmann::json& Context::require(const std::string& key) const { return need(config, key); }

Context load_context(const std::filesystem::path& config_path, const Overrides& overrides) {
    std::ifstream in(config_path);
    if (!in) throw ValidationError("cannot open config: " + config_path.string());
    Context ctx;
    try {
        ctx.config = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ValidationError("config parse error: " + std::string(e.what()));
    }
    if (!ctx.config.is_object()) throw ValidationError("config root must be a JSON object");
    ctx.config_dir = config_path.has_parent_path() ? config_path.parent_path() : std::filesystem::path(".");

    for (const auto& set : overrides.sets) {
        const auto eq = set.find('=');
        if (eq == std::string::npos || eq == 0) throw ValidationError("--set expects key=value, got '" + set + "'");
        std::string pointer = "/" + set.substr(0, eq);
        std::replace(pointer.begin(), pointer.end(), '.', '/');
        const std::string raw = set.substr(eq + 1);
        json value;
        try {
            value = json::parse(raw);
        } catch (const json::parse_error&) {
            value = raw;  // bare strings are fine
        }
        ctx.config[json::json_pointer(pointer)] = value;
    }

    if (overrides.seed)
        ctx.config["seed"] = *overrides.seed;
    else if (!ctx.config.contains("seed"))
        throw ValidationError("missing config key: seed (mandatory)");
    ctx.seed = ctx.config["seed"].get<std::uint64_t>();

    if (overrides.threads) ctx.config["threads"] = *overrides.threads;
    ctx.threads = ctx.config.value("threads", 0);
    if (ctx.threads <= 0) ctx.threads = std::max(1u, std::thread::hardware_concurrency());

    if (overrides.out_dir) ctx.config["out_dir"] = *overrides.out_dir;
    ctx.out_dir = ctx.resolve(ctx.config.value("out_dir", "out"));

    ctx.config_hash = artifacts::fnv1a64(ctx.config.dump());
    return ctx;
}

void run_corpus_score(const Context& ctx) {
    const CorpusArtifacts art = score_corpus(ctx);
    write_text(ctx.out_dir / "dcw_ranking.csv", corpus::ranking_to_csv(art.ranking, ctx.csv_header()));
}

void run_corpus_cluster(const Context& ctx) {
    const CorpusArtifacts art = score_corpus(ctx);
    std::vector<std::string> words;
    std::vector<std::vector<double>> points;
    for (const auto& entry : art.ranking.entries) {
        if (!entry.kept) continue;
        words.push_back(entry.word);
        points.push_back(corpus::word_vector(art.stats, entry.word).values);
    }
    if (words.empty()) throw ValidationError("corpus cluster: no words kept by the DCW threshold");

    const int k = get_or(ctx.config, "corpus.k", 4).get<int>();
    const int max_iter = get_or(ctx.config, "corpus.kmeans_max_iter", 100).get<int>();
    const cluster::ClusterState state = cluster::kmeans(points, k, ctx.seed, max_iter);

    std::map<std::string, std::set<std::string>> lexicon;
    const std::string lex_path = need(ctx.config, "corpus.lexicon").get<std::string>();
    std::ifstream in(ctx.resolve(lex_path));
    if (!in) throw ValidationError("cannot open lexicon: " + lex_path);
    const json lex = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    for (const auto& [dim, list] : lex.items())
        for (const auto& w : list) lexicon[dim].insert(w.get<std::string>());

    const auto dims = cluster::assign_dimensions(state, words, lexicon);
    write_text(ctx.out_dir / "clusters.csv", cluster::clusters_to_csv(state, words, dims, ctx.csv_header()));
}

void run_db_synth(const Context& ctx) {
    synth::Config config;
    config.seed = ctx.seed;
    config.days = get_or(ctx.config, "synth.days", config.days).get<int>();
    config.noise = get_or(ctx.config, "synth.noise", config.noise).get<double>();
    config.start = Date::parse(get_or(ctx.config, "synth.start", std::string("2015-01-01")).get<std::string>());
    config.g_count = get_or(ctx.config, "synth.counts.G", config.g_count).get<int>();
    config.a_count = get_or(ctx.config, "synth.counts.A", config.a_count).get<int>();
    config.i_count = get_or(ctx.config, "synth.counts.I", config.i_count).get<int>();
    config.s_count = get_or(ctx.config, "synth.counts.S", config.s_count).get<int>();
    const std::string dir = get_or(ctx.config, "synth.dir", std::string("synth")).get<std::string>();
    synth::write_dataset(config, ctx.resolve(dir), ctx.csv_header(), ctx.json_header());
}

void run_db_ingest(const Context& ctx) {
    const std::string data_dir = need(ctx.config, "store.data_dir").get<std::string>();
    const std::string manifest = need(ctx.config, "store.manifest").get<std::string>();
    const std::string target = need(ctx.config, "store.target").get<std::string>();

    std::vector<stdb::FeatureSeries> series = stdb::ingest(ctx.resolve(data_dir), ctx.resolve(manifest));
    std::vector<std::pair<std::string, std::string>> units;
    for (auto& s : series) {
        units.emplace_back(s.name, s.unit);
        if (s.cadence == stdb::Cadence::monthly) s = stdb::monthly_to_daily(s);
    }
    const stdb::FeatureTable table = stdb::assemble(series, target);
    stdb::write_store(table, store_csv_path(ctx), store_meta_path(ctx), ctx.csv_header(), units);
}

void run_db_impute(const Context& ctx) {
    const stdb::FeatureTable table = load_store(ctx);
    const int rounds = get_or(ctx.config, "store.impute_rounds", 5).get<int>();
    const stdb::FeatureTable imputed = stdb::impute(table, rounds, ctx.seed, ctx.threads);
    stdb::write_store(imputed, store_csv_path(ctx), store_meta_path(ctx), ctx.csv_header(),
                      read_units(store_meta_path(ctx)));
}

void run_identify_features(const Context& ctx) {
    const stdb::FeatureTable table = load_store(ctx);
    const identify::LvkbResult result = run_lvkb(ctx, table);
    if (result.identified.empty()) std::cerr << "warning: no features passed the LV-KB thresholds\n";
    write_text(ctx.out_dir / "feature_scores.csv",
               identify::scores_to_csv(result.scores, ctx.csv_header(), result.variance_threshold,
                                       result.kbest_threshold));
    write_text(ctx.out_dir / "identified_counts.json", identify::counts_to_json(result, ctx.json_header()));
}

void run_identify_dims(const Context& ctx) {
    const stdb::FeatureTable table = load_store(ctx);
    const std::string kind = get_or(ctx.config, "identify.shapley_model", std::string("ridge")).get<std::string>();
    const models::TrainedModel model = models::fit(spec_for_kind(ctx, kind), table);

    // Groups: one per non-load dimension present among the model inputs.
    const stdb::Dimension order[] = {stdb::Dimension::G, stdb::Dimension::A, stdb::Dimension::I, stdb::Dimension::S,
                                     stdb::Dimension::L};
    std::vector<std::vector<int>> groups;
    std::vector<std::string> names;
    for (auto dim : order) {
        std::vector<int> members;
        for (std::size_t c = 0; c < model.columns.size(); ++c)
            if (model.columns[c].dimension == dim) members.push_back(static_cast<int>(c));
        if (!members.empty()) {
            groups.push_back(std::move(members));
            names.emplace_back(1, stdb::dimension_char(dim));
        }
    }

    const std::size_t d = model.columns.size();
    std::vector<int> source(d);
    for (std::size_t c = 0; c < d; ++c) source[c] = table.col_index(model.columns[c].name);
    std::vector<double> baseline(d, 0.0);
    for (std::size_t r = 0; r < table.rows(); ++r)
        for (std::size_t c = 0; c < d; ++c) baseline[c] += table.at(r, source[c]);
    for (auto& v : baseline) v /= table.rows();

    const int wanted = get_or(ctx.config, "identify.shapley_samples", 120).get<int>();
    const std::size_t count = std::min<std::size_t>(std::max(wanted, 1), table.rows());
    std::vector<std::vector<double>> samples;
    std::vector<std::string> ids;
    for (std::size_t s = 0; s < count; ++s) {
        const std::size_t r = count == 1 ? 0 : s * (table.rows() - 1) / (count - 1);
        std::vector<double> row(d);
        for (std::size_t c = 0; c < d; ++c) row[c] = table.at(r, source[c]);
        samples.push_back(std::move(row));
        ids.push_back(table.dates[r].iso());
    }

    const auto fn = [&model](const std::vector<double>& row) { return model.predict_row(row); };
    const identify::DimensionAttribution attr =
        identify::grouped_shapley(fn, samples, baseline, groups, names);
    write_text(ctx.out_dir / "dimension_attribution.csv", identify::attribution_to_csv(attr, ids, ctx.csv_header()));

    // Beeswarm coloring: per-group mean of min-max-scaled member values.
    std::vector<std::vector<double>> feature_values(samples.size(), std::vector<double>(groups.size(), 0.0));
    for (std::size_t s = 0; s < samples.size(); ++s) {
        std::vector<double> scaled(d);
        model.scaler.transform_row(samples[s].data(), scaled.data());
        for (std::size_t g = 0; g < groups.size(); ++g) {
            double mean = 0;
            for (int c : groups[g]) mean += scaled[c];
            feature_values[s][g] = mean / groups[g].size();
        }
    }
    const analyze::BeeswarmFiles files =
        analyze::beeswarm_export(attr, feature_values, ids, ctx.seed, ctx.csv_header());
    write_text(ctx.out_dir / "beeswarm.csv", files.csv);
    write_text(ctx.out_dir / "beeswarm.svg", files.svg);
}

void run_forecast_compare(const Context& ctx) {
    const stdb::FeatureTable store = load_store(ctx);
    const std::vector<int> lags = config_lags(ctx);
    stdb::FeatureTable table = stdb::add_lag_features(store, store.target, lags);
    table = stdb::add_date_coefficients(table);

    const auto schemes = resolve_schemes(ctx, store, lags);
    std::vector<models::ModelSpec> specs;
    for (const auto& entry : need(ctx.config, "models")) specs.push_back(parse_model_spec(entry, ctx.seed));

    const stdb::DateRange train = parse_range(need(ctx.config, "split.train"), "split.train");
    const stdb::DateRange test = parse_range(need(ctx.config, "split.test"), "split.test");

    const models::ComparisonReport report = models::compare_schemes(table, schemes, specs, train, test);
    write_text(ctx.out_dir / "comparison.csv", models::comparison_to_csv(report, ctx.csv_header()));
    write_text(ctx.out_dir / "comparison.svg", models::comparison_to_svg(report, ctx.svg_header()));
}

void run_analyze_sobol(const Context& ctx) {
    const stdb::FeatureTable store = load_store(ctx);
    const stdb::FeatureTable agg = analyze::dimension_aggregate(store);
    const stdb::DateRange train = parse_range(need(ctx.config, "split.train"), "split.train");
    const stdb::DateRange test = parse_range(need(ctx.config, "split.test"), "split.test");
    const stdb::FeatureTable agg_train = stdb::split(agg, train, test).first;

    const std::string kind = get_or(ctx.config, "sobol.model", std::string("mlp")).get<std::string>();
    const models::TrainedModel model = models::fit(spec_for_kind(ctx, kind), agg_train);

    std::vector<std::pair<double, double>> bounds;
    std::vector<std::string> names;
    for (std::size_t c = 0; c < agg_train.cols(); ++c) {
        if (static_cast<int>(c) == agg_train.target_index()) continue;
        double mn = agg_train.at(0, c), mx = mn;
        for (std::size_t r = 1; r < agg_train.rows(); ++r) {
            mn = std::min(mn, agg_train.at(r, c));
            mx = std::max(mx, agg_train.at(r, c));
        }
        bounds.emplace_back(mn, mx);
        names.push_back(agg_train.columns[c].name);
    }

    const auto fn = [&model](const std::vector<double>& row) { return model.predict_row(row); };
    const analyze::SobolReport report =
        analyze::sobol_indices(fn, bounds, names, get_or(ctx.config, "sobol.n", 1000).get<int>(), ctx.seed);
    write_text(ctx.out_dir / "sobol.csv", analyze::sobol_to_csv(report, ctx.csv_header()));
}

void run_analyze_pdp(const Context& ctx) {
    const stdb::FeatureTable store = load_store(ctx);
    const stdb::DateRange train_range = parse_range(need(ctx.config, "split.train"), "split.train");
    const stdb::DateRange test_range = parse_range(need(ctx.config, "split.test"), "split.test");
    const stdb::FeatureTable train = stdb::split(store, train_range, test_range).first;

    const std::string kind = get_or(ctx.config, "pdp.model", std::string("gbrt")).get<std::string>();
    const models::TrainedModel model = models::fit(spec_for_kind(ctx, kind), train);
    const int grid = get_or(ctx.config, "pdp.grid", 41).get<int>();

    const json features = need(ctx.config, "pdp.features");
    for (const auto& f : features) {
        const std::string name = f.get<std::string>();
        const analyze::PDPCurve curve = analyze::partial_dependence(model, train, name, grid);
        write_text(ctx.out_dir / ("pdp_" + name + ".csv"), analyze::pdp_to_csv(curve, ctx.csv_header()));
        write_text(ctx.out_dir / ("pdp_" + name + ".svg"), analyze::pdp_to_svg(curve, ctx.svg_header()));
    }
}

void run_analyze_lag(const Context& ctx) {
    const stdb::FeatureTable store = load_store(ctx);
    const int max_lag = get_or(ctx.config, "lag.max_lag", 80).get<int>();
    const std::vector<double> y = store.column_values(store.target_index());

    std::vector<analyze::LagReport> reports;
    for (const auto& f : need(ctx.config, "lag.features")) {
        const std::string name = f.get<std::string>();
        const int c = store.col_index(name);
        if (c < 0) throw ValidationError("lag: unknown feature '" + name + "'");
        reports.push_back(analyze::lag_correlation(store.column_values(c), y, max_lag, name));
    }
    write_text(ctx.out_dir / "lags.csv", analyze::lags_to_csv(reports, ctx.csv_header()));
}

void run_report(const Context& ctx) {
    std::ostringstream html;
    html << "<!-- " << ctx.svg_header() << " -->\n<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">\n";
    html << "<title>dfd report</title>\n<style>body{font-family:sans-serif;max-width:60em;margin:2em auto;"
            "color:#222}h2{border-bottom:1px solid #ccc;padding-bottom:4px}li{margin:2px 0}"
            "figure{margin:1em 0}</style></head>\n<body>\n";
    html << "<h1>Feature discovery report</h1>\n";
    html << "<p>config <code>" << artifacts::hash_hex(ctx.config_hash) << "</code>, seed " << ctx.seed << "</p>\n";

    auto link_if = [&](const std::string& file, const std::string& label) {
        if (std::filesystem::exists(ctx.out_dir / file))
            html << "<li><a href=\"../" << file << "\">" << html_escape(label) << "</a></li>\n";
    };
    auto inline_svg = [&](const std::string& file) {
        const auto path = ctx.out_dir / file;
        if (!std::filesystem::exists(path)) return;
        std::ifstream in(path);
        std::stringstream buf;
        buf << in.rdbuf();
        html << "<figure>" << buf.str() << "</figure>\n";
    };

    html << "<h2>Corpus</h2>\n<ul>\n";
    link_if("dcw_ranking.csv", "DCW ranking");
    link_if("clusters.csv", "word clusters");
    html << "</ul>\n";

    html << "<h2>Feature store</h2>\n<ul>\n";
    link_if("4dmstd.csv", "assembled store");
    link_if("4dmstd.meta.json", "store metadata");
    html << "</ul>\n";

    html << "<h2>Identification</h2>\n<ul>\n";
    link_if("feature_scores.csv", "feature scores");
    link_if("identified_counts.json", "identified counts");
    link_if("dimension_attribution.csv", "dimension attribution");
    link_if("beeswarm.csv", "beeswarm data");
    html << "</ul>\n";
    inline_svg("beeswarm.svg");

    html << "<h2>Forecast comparison</h2>\n<ul>\n";
    link_if("comparison.csv", "metrics grid");
    html << "</ul>\n";
    inline_svg("comparison.svg");

    html << "<h2>Sensitivity and effects</h2>\n<ul>\n";
    link_if("sobol.csv", "Sobol indices");
    link_if("lags.csv", "lag correlations");
    for (const auto& entry : std::filesystem::directory_iterator(ctx.out_dir)) {
        const auto name = entry.path().filename().string();
        if (name.rfind("pdp_", 0) == 0 && entry.path().extension() == ".csv")
            html << "<li><a href=\"../" << name << "\">" << html_escape(name) << "</a></li>\n";
    }
    html << "</ul>\n";
    {
        std::vector<std::string> svgs;
        for (const auto& entry : std::filesystem::directory_iterator(ctx.out_dir)) {
            const auto name = entry.path().filename().string();
            if (name.rfind("pdp_", 0) == 0 && entry.path().extension() == ".svg") svgs.push_back(name);
        }
        std::sort(svgs.begin(), svgs.end());
        for (const auto& name : svgs) inline_svg(name);
    }

    html << "<h2>Run log</h2>\n<ul>\n";
    link_if("runlog.jsonl", "runlog");
    html << "</ul>\n";
    html << "<h2>Notes</h2>\n<p>All artifacts carry a header comment with the config hash and seed; re-running a "
            "subcommand with the same config and seed reproduces them byte for byte. Bundled data is synthetic.</p>\n";
    html << "</body></html>\n";

    write_text(ctx.out_dir / "report" / "index.html", html.str());
}

}  // namespace dfd::pipeline

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "dfd/artifacts.hpp"
#include "dfd/errors.hpp"
#include "dfd/pipeline.hpp"

namespace {

using RunFn = void (*)(const dfd::pipeline::Context&);

constexpr int kUsageError = 64;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"feature discovery toolkit for short-term power demand forecasting"};
    app.set_version_flag("--version", std::string("dfd ") + std::string(dfd::kToolVersion));
    app.require_subcommand(1);

    std::string config_path;
    dfd::pipeline::Overrides overrides;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--set", overrides.sets, "config override as dotted.key=value (repeatable)");
    app.add_option("--seed", overrides.seed, "seed override");
    app.add_option("--threads", overrides.threads, "worker threads (0 = hardware)");
    app.add_option("--out", overrides.out_dir, "output directory override");

    RunFn run = nullptr;
    std::string name;
    const auto leaf = [&run, &name](CLI::App* parent, const char* sub, const char* desc, RunFn fn,
                                    const char* full) {
        CLI::App* s = parent->add_subcommand(sub, desc);
        s->fallthrough();
        s->callback([&run, &name, fn, full] {
            run = fn;
            name = full;
        });
    };
    const auto group = [&app](const char* sub, const char* desc) {
        CLI::App* g = app.add_subcommand(sub, desc);
        g->fallthrough();
        g->require_subcommand(1);
        return g;
    };

    CLI::App* corpus = group("corpus", "score and cluster corpus words");
    leaf(corpus, "score", "rank words by demand-coupling weight", &dfd::pipeline::run_corpus_score, "corpus score");
    leaf(corpus, "cluster", "group kept words into dimensions", &dfd::pipeline::run_corpus_cluster, "corpus cluster");

    CLI::App* db = group("db", "build and maintain the feature store");
    leaf(db, "synth", "generate the synthetic dataset", &dfd::pipeline::run_db_synth, "db synth");
    leaf(db, "ingest", "assemble raw series into the store", &dfd::pipeline::run_db_ingest, "db ingest");
    leaf(db, "impute", "fill missing store cells in place", &dfd::pipeline::run_db_impute, "db impute");

    CLI::App* identify = group("identify", "rank dimensions and select features");
    leaf(identify, "dims", "grouped Shapley attribution per dimension", &dfd::pipeline::run_identify_dims,
         "identify dims");
    leaf(identify, "features", "variance + F-score feature selection", &dfd::pipeline::run_identify_features,
         "identify features");

    CLI::App* forecast = group("forecast", "train and compare forecasting models");
    leaf(forecast, "compare", "score feature schemes across models", &dfd::pipeline::run_forecast_compare,
         "forecast compare");

    CLI::App* analyze = group("analyze", "sensitivity and effect diagnostics");
    leaf(analyze, "sobol", "variance-based sensitivity indices", &dfd::pipeline::run_analyze_sobol, "analyze sobol");
    leaf(analyze, "pdp", "partial dependence curves", &dfd::pipeline::run_analyze_pdp, "analyze pdp");
    leaf(analyze, "lag", "lag correlation scan", &dfd::pipeline::run_analyze_lag, "analyze lag");

    leaf(&app, "report", "bundle artifacts into an HTML report", &dfd::pipeline::run_report, "report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    if (config_path.empty()) {
        std::cerr << "error: --config is required\n";
        return kUsageError;
    }

    int code = 0;
    bool have_context = false;
    dfd::pipeline::Context ctx;
    try {
        ctx = dfd::pipeline::load_context(config_path, overrides);
        have_context = true;
        run(ctx);
    } catch (const dfd::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        code = 1;
    } catch (const dfd::ComputeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        code = 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        code = 2;
    }
    if (have_context)
        dfd::artifacts::append_runlog(ctx.out_dir / "runlog.jsonl", name, ctx.config_hash, ctx.seed, code);
    return code;
}

// End-to-end acceptance gate: one line per criterion, nonzero exit on any failure.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dfd/analyze.hpp"
#include "dfd/cluster.hpp"
#include "dfd/corpus.hpp"
#include "dfd/identify.hpp"
#include "dfd/mlp.hpp"
#include "dfd/models.hpp"
#include "dfd/rng.hpp"
#include "dfd/stdb.hpp"
#include "dfd/synth.hpp"

namespace fs = std::filesystem;
using namespace dfd;

namespace {

int g_failures = 0;

struct Criterion {
    int index;
    const char* name;
    double budget_s;  // 0 = no budget
    std::vector<std::string> problems;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    std::ostringstream detail;

    void expect(bool ok, const std::string& what) {
        if (!ok) problems.push_back(what);
    }

    void finish() {
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (budget_s > 0 && secs > budget_s) {
            std::ostringstream over;
            over << "runtime " << secs << "s exceeds " << budget_s << "s";
            problems.push_back(over.str());
        }
        const bool pass = problems.empty();
        if (!pass) ++g_failures;
        std::printf("%s  %d. %-22s [%5.2fs] %s\n", pass ? "PASS" : "FAIL", index, name, secs,
                    pass ? detail.str().c_str() : problems.front().c_str());
        for (std::size_t i = 1; i < problems.size(); ++i)
            std::printf("      %d. %-22s          %s\n", index, "", problems[i].c_str());
    }
};

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// ---------------------------------------------------------------- criterion 1

// Independent window enumeration sharing no code with the library.
struct BruteStats {
    std::map<std::string, long> word_windows;
    std::map<std::pair<std::string, std::string>, long> pair_windows;
    long total = 0;

    BruteStats(const std::vector<std::vector<std::string>>& docs, int w) {
        for (const auto& tokens : docs) {
            const int n = static_cast<int>(tokens.size());
            const int count = n <= w ? 1 : n - w + 1;
            for (int s = 0; s < count; ++s) {
                std::set<std::string> seen(tokens.begin() + s, tokens.begin() + std::min(n, s + w));
                ++total;
                for (const auto& a : seen) ++word_windows[a];
                for (auto i = seen.begin(); i != seen.end(); ++i)
                    for (auto j = std::next(i); j != seen.end(); ++j) ++pair_windows[{*i, *j}];
            }
        }
    }
    double p(const std::string& a) const { return double(word_windows.at(a)) / total; }
    double p2(std::string a, std::string b) const {
        if (a > b) std::swap(a, b);
        const auto it = pair_windows.find({a, b});
        return it == pair_windows.end() ? 0.0 : double(it->second) / total;
    }
    std::optional<double> pmi(const std::string& a, const std::string& b) const {
        const double joint = p2(a, b);
        if (joint == 0) return std::nullopt;
        return std::log(joint / (p(a) * p(b)));
    }
    std::vector<double> vec(const std::string& a) const {
        std::vector<double> out;
        for (const auto& [w, cnt] : word_windows) {
            (void)cnt;
            if (w == a) {
                out.push_back(0);
                continue;
            }
            const auto v = pmi(a, w);
            out.push_back(v && *v > 0 ? *v : 0.0);
        }
        return out;
    }
    std::optional<double> cosine(const std::string& a, const std::string& b) const {
        const auto va = vec(a), vb = vec(b);
        double dot = 0, na = 0, nb = 0;
        for (std::size_t i = 0; i < va.size(); ++i) {
            dot += va[i] * vb[i];
            na += va[i] * va[i];
            nb += vb[i] * vb[i];
        }
        if (na == 0 || nb == 0) return std::nullopt;
        const double c = dot / (std::sqrt(na) * std::sqrt(nb));
        return c <= 1e-6 ? std::nullopt : std::optional<double>(c);
    }
};

void criterion_dcw(Criterion& c) {
    const std::vector<std::vector<std::vector<std::string>>> corpora{
        {{"demand", "rises", "when", "heat", "rises"},
         {"heat", "drives", "demand", "and", "wind", "cools", "demand"},
         {"wind", "turbines", "feed", "the", "grid"}},
        {{"demand", "peaks", "follow", "price", "peaks"},
         {"price", "signals", "shift", "demand"},
         {"gas", "price", "moves", "daily"},
         {"solar", "noon", "cuts", "gas", "burn"},
         {"demand", "dips", "at", "solar", "noon"}},
        {{"demand", "tracks", "temperature"},
         {"temperature", "tracks", "season"},
         {"lonely"},
         {"season", "shapes", "demand"}}};
    const int window = 3;
    int checked = 0, undefined_total = 0;

    for (const auto& docs : corpora) {
        std::vector<corpus::Document> lib_docs;
        for (std::size_t i = 0; i < docs.size(); ++i) {
            corpus::Document d;
            d.id = "d" + std::to_string(i);
            d.tokens = docs[i];
            lib_docs.push_back(std::move(d));
        }
        const auto stats = corpus::build_stats(lib_docs, window);
        const BruteStats brute(docs, window);

        int undefined = 0;
        std::set<std::string> want_kept;
        for (const auto& [word, cnt] : brute.word_windows) {
            (void)cnt;
            if (word == "demand") continue;
            const auto opmi = brute.pmi("demand", word);
            const auto ocos = brute.cosine("demand", word);
            if (!opmi || !ocos) {
                ++undefined;
                bool threw = false;
                try {
                    (void)corpus::dcw_score(stats, "demand", word);
                } catch (const std::exception&) {
                    threw = true;
                }
                c.expect(threw, "dcw_score('" + word + "') should be undefined");
                continue;
            }
            const double odcw = *opmi / *ocos;
            c.expect(near(corpus::pmi(stats, "demand", word), *opmi, 1e-12), "pmi mismatch for " + word);
            c.expect(near(corpus::cosine(corpus::word_vector(stats, "demand"), corpus::word_vector(stats, word)),
                          *ocos, 1e-12),
                     "cosine mismatch for " + word);
            c.expect(near(corpus::dcw_score(stats, "demand", word), odcw, 1e-12), "dcw mismatch for " + word);
            if (odcw > 0.1) want_kept.insert(word);
            ++checked;
        }
        undefined_total += undefined;

        const auto ranking = corpus::rank_features(stats, "demand", 0.1);
        std::set<std::string> got_kept;
        for (const auto& e : ranking.entries)
            if (e.kept) got_kept.insert(e.word);
        c.expect(got_kept == want_kept, "kept set disagrees with the 0.1 threshold rule");
        c.expect(ranking.undefined_count == undefined, "undefined_count mismatch");
        for (std::size_t i = 1; i < ranking.entries.size(); ++i) {
            const auto& a = ranking.entries[i - 1];
            const auto& b = ranking.entries[i];
            c.expect(a.dcw > b.dcw || (a.dcw == b.dcw && a.word < b.word), "ranking order violated");
        }
    }
    c.detail << checked << " word pairs vs brute force, " << undefined_total << " undefined";
}

// ---------------------------------------------------------------- criterion 2

double score_partition(const std::vector<std::vector<double>>& pts, const std::vector<int>& assign, int k) {
    const std::size_t dim = pts[0].size();
    std::vector<std::vector<double>> centers(k, std::vector<double>(dim, 0.0));
    std::vector<int> count(k, 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        ++count[assign[i]];
        for (std::size_t j = 0; j < dim; ++j) centers[assign[i]][j] += pts[i][j];
    }
    for (int g = 0; g < k; ++g)
        if (count[g])
            for (auto& v : centers[g]) v /= count[g];
    double obj = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            const double dv = pts[i][j] - centers[assign[i]][j];
            obj += dv * dv;
        }
    return obj;
}

void criterion_kmeans(Criterion& c) {
    Rng rng(2024);
    int monotone_checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 10 + static_cast<int>(rng.index(50));
        const int dim = 1 + static_cast<int>(rng.index(4));
        const int k = 2 + static_cast<int>(rng.index(4));
        std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
        for (auto& p : pts)
            for (auto& v : p) v = rng.uniform(-10, 10);
        const auto state = cluster::kmeans(pts, k, trial, 100);
        for (std::size_t i = 1; i < state.objective_history.size(); ++i)
            c.expect(state.objective_history[i] <= state.objective_history[i - 1] + 1e-9,
                     "objective increased on fixture " + std::to_string(trial));
        monotone_checked += static_cast<int>(state.objective_history.size());
    }

    int optimal = 0, instances = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 5 + static_cast<int>(rng.index(4));  // 5..8 points
        const int k = 2 + static_cast<int>(rng.index(2));
        std::vector<std::vector<double>> pts(n, std::vector<double>(2));
        for (auto& p : pts)
            for (auto& v : p) v = rng.uniform(0, 4);

        double want = 1e300;  // exhaustive optimum over all k^n assignments
        std::vector<int> assign(n, 0);
        const long total = static_cast<long>(std::pow(k, n));
        for (long code = 0; code < total; ++code) {
            long x = code;
            bool used_all = true;
            std::vector<int> seen(k, 0);
            for (int i = 0; i < n; ++i) {
                assign[i] = static_cast<int>(x % k);
                seen[assign[i]] = 1;
                x /= k;
            }
            for (int g = 0; g < k; ++g)
                if (!seen[g]) used_all = false;
            if (!used_all) continue;
            want = std::min(want, score_partition(pts, assign, k));
        }

        double best = 1e300;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto state = cluster::kmeans(pts, k, seed, 100);
            best = std::min(best, score_partition(pts, state.assignments, k));
        }
        ++instances;
        if (best == want) ++optimal;  // same arithmetic path on both sides
        c.expect(best == want, "missed the brute-force optimum on instance " + std::to_string(trial));
    }
    c.detail << monotone_checked << " objective steps monotone; " << optimal << "/" << instances
             << " small instances optimal";
}

// ------------------------------------------------------- shared synthetic data

struct SynthStore {
    synth::Dataset dataset;
    stdb::FeatureTable table;  // imputed
};

SynthStore build_store(double noise, std::uint64_t seed) {
    synth::Config cfg;
    cfg.days = 3000;
    cfg.noise = noise;
    cfg.seed = seed;
    const fs::path dir =
        fs::temp_directory_path() / ("dfd_acc_" + std::to_string(::getpid()) + "_" + std::to_string(int(noise * 10)));
    fs::remove_all(dir);
    fs::create_directories(dir);
    synth::write_dataset(cfg, dir, "# acceptance\n", "// acceptance\n");

    SynthStore out;
    out.dataset = synth::generate(cfg);
    auto series = stdb::ingest(dir, dir / "manifest.json");
    for (auto& s : series)
        if (s.cadence == stdb::Cadence::monthly) s = stdb::monthly_to_daily(s);
    const auto raw = stdb::assemble(series, "load");
    out.table = stdb::impute(raw, 3, seed, 1);
    fs::remove_all(dir);
    return out;
}

// ---------------------------------------------------------------- criterion 3

void criterion_lvkb(Criterion& c, SynthStore& noisy, SynthStore& clean) {
    const auto [r, f] = identify::f_score({1, 2, 3, 4}, {1, 2, 3, 5});
    const double r_want = 6.5 / std::sqrt(5.0 * 8.75);
    const double f_want = r_want * r_want / (1 - r_want * r_want) * 2.0;
    c.expect(near(r, r_want, 1e-6), "worked example r");
    c.expect(near(f, f_want, 1e-6), "worked example f");
    c.expect(near(f, 169.0 / 3.0, 1e-6), "worked example f closed form");

    noisy = build_store(1.0, 42);
    clean = build_store(0.0, 42);

    const std::set<std::string> planted(noisy.dataset.planted.begin(), noisy.dataset.planted.end());
    const auto res = identify::lvkb(noisy.table, 0.88, 30.0, 0);
    int hits = 0, false_pos = 0;
    for (const auto& name : res.identified)
        planted.count(name) ? ++hits : ++false_pos;
    c.expect(hits >= 10, "noisy store: only " + std::to_string(hits) + "/12 planted features found");
    c.expect(false_pos <= 5, "noisy store: " + std::to_string(false_pos) + " false positives (max 5)");

    const auto res0 = identify::lvkb(clean.table, 0.88, 30.0, 0);
    const std::set<std::string> found0(res0.identified.begin(), res0.identified.end());
    int hits0 = 0;
    for (const auto& name : planted)
        if (found0.count(name)) ++hits0;
    c.expect(hits0 == static_cast<int>(planted.size()),
             "noise-free store: " + std::to_string(hits0) + "/12 planted features found");
    c.detail << "r/f exact; noise 1.0: " << hits << "/12 planted, " << false_pos << " FP; noise 0: " << hits0
             << "/12";
}

// ---------------------------------------------------------------- criterion 4

void criterion_shapley(Criterion& c, const SynthStore& noisy) {
    Rng rng(8);
    const int d = 5;
    std::vector<std::vector<double>> samples(30, std::vector<double>(d));
    for (auto& s : samples)
        for (auto& v : s) v = rng.uniform(-2, 2);
    std::vector<double> baseline(d, 0.25);
    const std::vector<std::vector<int>> groups{{0, 1}, {2}, {3, 4}};

    const identify::PredictFn nonlinear = [](const std::vector<double>& x) {
        return std::sin(x[0]) * x[1] + std::exp(0.3 * x[2]) + x[3] * x[4] * x[0] - 2.0 * x[3];
    };
    const auto attr = identify::grouped_shapley(nonlinear, samples, baseline, groups, {"a", "b", "c"});
    const double base_val = nonlinear(baseline);
    for (std::size_t s = 0; s < samples.size(); ++s) {
        double sum = 0;
        for (double v : attr.values[s]) sum += v;
        c.expect(near(sum + base_val, nonlinear(samples[s]), 1e-8), "efficiency violated on sample " + std::to_string(s));
        c.expect(near(attr.predictions[s], nonlinear(samples[s]), 1e-12), "prediction mismatch");
    }

    const std::vector<double> w{1.5, -2.0, 0.5, 3.0, 0.0};
    const identify::PredictFn linear = [&](const std::vector<double>& x) {
        double out = 7.0;
        for (int i = 0; i < d; ++i) out += w[i] * x[i];
        return out;
    };
    const auto lin = identify::grouped_shapley(linear, samples, baseline, groups, {"a", "b", "c"});
    for (std::size_t s = 0; s < samples.size(); ++s) {
        for (std::size_t g = 0; g < groups.size(); ++g) {
            double want = 0;
            for (int j : groups[g]) want += w[j] * (samples[s][j] - baseline[j]);
            c.expect(near(lin.values[s][g], want, 1e-8), "linear closed form violated");
        }
    }

    const identify::PredictFn ignores_c = [](const std::vector<double>& x) { return x[0] - x[1] + 0.5 * x[3]; };
    const auto nul = identify::grouped_shapley(ignores_c, samples, baseline, groups, {"a", "b", "c"});
    for (std::size_t s = 0; s < samples.size(); ++s)
        c.expect(nul.values[s][1] == 0.0, "null group attribution must be exactly zero");

    // planted dominant dimension on the synthetic store, ridge surrogate
    models::ModelSpec spec;
    spec.kind = models::Kind::ridge;
    const auto model = models::fit(spec, noisy.table);
    std::vector<std::vector<int>> dim_groups(4);
    const std::vector<std::string> dim_names{"G", "A", "I", "S"};
    for (std::size_t col = 0; col < model.columns.size(); ++col) {
        switch (model.columns[col].dimension) {
            case stdb::Dimension::G: dim_groups[0].push_back(static_cast<int>(col)); break;
            case stdb::Dimension::A: dim_groups[1].push_back(static_cast<int>(col)); break;
            case stdb::Dimension::I: dim_groups[2].push_back(static_cast<int>(col)); break;
            case stdb::Dimension::S: dim_groups[3].push_back(static_cast<int>(col)); break;
            default: break;
        }
    }
    std::vector<double> means(model.columns.size(), 0.0);
    std::vector<std::vector<double>> rows;
    const int ti = noisy.table.target_index();
    for (std::size_t r = 0; r < noisy.table.rows(); r += noisy.table.rows() / 120) {
        std::vector<double> row;
        for (std::size_t col = 0; col < noisy.table.cols(); ++col)
            if (static_cast<int>(col) != ti) row.push_back(noisy.table.at(r, col));
        rows.push_back(std::move(row));
    }
    for (std::size_t r = 0; r < noisy.table.rows(); ++r) {
        std::size_t k = 0;
        for (std::size_t col = 0; col < noisy.table.cols(); ++col)
            if (static_cast<int>(col) != ti) means[k++] += noisy.table.at(r, col);
    }
    for (auto& v : means) v /= noisy.table.rows();
    const identify::PredictFn surrogate = [&](const std::vector<double>& x) { return model.predict_row(x); };
    const auto dims = identify::grouped_shapley(surrogate, rows, means, dim_groups, dim_names);
    std::size_t top = 0;
    for (std::size_t g = 1; g < dims.mean_abs.size(); ++g)
        if (dims.mean_abs[g] > dims.mean_abs[top]) top = g;
    c.expect(dim_names[top] == noisy.dataset.dominant_dimension,
             "dominant dimension came out " + dim_names[top] + ", planted " + noisy.dataset.dominant_dimension);
    c.detail << "efficiency/linear/null exact; dominant=" << dim_names[top] << " (mean|attr| "
             << dims.mean_abs[top] << ")";
}

// ---------------------------------------------------------------- criterion 5

void criterion_sobol(Criterion& c) {
    const double a = 7.0, b = 0.1;
    const analyze::ModelFn ishigami = [&](const std::vector<double>& x) {
        return std::sin(x[0]) + a * std::sin(x[1]) * std::sin(x[1]) + b * std::pow(x[2], 4) * std::sin(x[0]);
    };
    const double pi = std::acos(-1.0);
    const double D = a * a / 8 + b * std::pow(pi, 4) / 5 + b * b * std::pow(pi, 8) / 18 + 0.5;
    const double V13 = 8 * b * b * std::pow(pi, 8) / 225;
    const std::vector<double> s1_true{0.5 * std::pow(1 + b * std::pow(pi, 4) / 5, 2) / D, a * a / 8 / D, 0.0};
    const std::vector<double> st_true{s1_true[0] + V13 / D, s1_true[1], V13 / D};

    std::vector<double> s1_err(3, 0.0), st_err(3, 0.0);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto rep = analyze::sobol_indices(ishigami, {{-pi, pi}, {-pi, pi}, {-pi, pi}}, {"x1", "x2", "x3"},
                                                4096, seed);
        for (int i = 0; i < 3; ++i) {
            s1_err[i] += std::abs(rep.s1[i] - s1_true[i]) / 5;
            st_err[i] += std::abs(rep.st[i] - st_true[i]) / 5;
        }
    }
    for (int i = 0; i < 3; ++i) {
        c.expect(s1_err[i] <= 0.02, "ishigami S1[" + std::to_string(i) + "] mean error " + std::to_string(s1_err[i]));
        c.expect(st_err[i] <= 0.02, "ishigami ST[" + std::to_string(i) + "] mean error " + std::to_string(st_err[i]));
    }

    const analyze::ModelFn additive = [](const std::vector<double>& x) { return x[0] + x[1]; };
    const auto rep = analyze::sobol_indices(additive, {{0, 1}, {0, 1}}, {"u", "v"}, 1000, 7);
    c.expect(near(rep.s1[0], 0.5, 0.03), "additive S1[0] = " + std::to_string(rep.s1[0]));
    c.expect(near(rep.s1[1], 0.5, 0.03), "additive S1[1] = " + std::to_string(rep.s1[1]));
    c.expect(near(rep.s2[0][1], 0.0, 0.03), "additive S2 = " + std::to_string(rep.s2[0][1]));

    c.detail << "ishigami mean|err| S1 " << s1_err[0] << "/" << s1_err[1] << "/" << s1_err[2] << ", ST " << st_err[0]
             << "/" << st_err[1] << "/" << st_err[2];
}

// ---------------------------------------------------------------- criterion 6

stdb::FeatureTable pdp_table(int rows, std::uint64_t seed, bool vshape) {
    Rng rng(seed);
    stdb::FeatureTable t;
    t.columns = {{"x1", stdb::Dimension::G}, {"x2", stdb::Dimension::A}, {"load", stdb::Dimension::L}};
    t.target = "load";
    t.matrix.resize(static_cast<std::size_t>(rows) * 3);
    for (int r = 0; r < rows; ++r) {
        t.dates.push_back(Date::from_ymd(2020, 1, 1) + r);
        const double x1 = rng.uniform(0, 10), x2 = rng.uniform(-1, 1);
        t.at(r, 0) = x1;
        t.at(r, 1) = x2;
        t.at(r, 2) = vshape ? std::abs(x1 - 6.0) + 0.05 * x2 : 3.0 * x1 - 2.0 * x2 + 5.0;
    }
    return t;
}

void criterion_pdp(Criterion& c) {
    const auto linear = pdp_table(200, 4, false);
    models::ModelSpec ridge;
    ridge.kind = models::Kind::ridge;
    ridge.lambda = 1e-9;
    const auto lin_model = models::fit(ridge, linear);
    const auto curve = analyze::partial_dependence(lin_model, linear, "x1", 21);
    for (std::size_t i = 1; i < curve.grid.size(); ++i) {
        const double slope = (curve.pd[i] - curve.pd[i - 1]) / (curve.grid[i] - curve.grid[i - 1]);
        c.expect(near(slope, 3.0, 1e-6), "linear pdp slope " + std::to_string(slope));
    }

    const auto vee = pdp_table(600, 9, true);
    models::ModelSpec gbrt;
    gbrt.kind = models::Kind::gbrt;
    gbrt.gbrt = {300, 4, 0.1, 5};
    const auto v_model = models::fit(gbrt, vee);
    const auto vcurve = analyze::partial_dependence(v_model, vee, "x1", 41);
    std::size_t argmin = 0;
    for (std::size_t i = 1; i < vcurve.pd.size(); ++i)
        if (vcurve.pd[i] < vcurve.pd[argmin]) argmin = i;
    const double step = vcurve.grid[1] - vcurve.grid[0];
    c.expect(std::abs(vcurve.grid[argmin] - 6.0) <= step + 1e-9,
             "v-shape minimum at " + std::to_string(vcurve.grid[argmin]) + ", step " + std::to_string(step));
    c.detail << "slope exact; v minimum at " << vcurve.grid[argmin] << " (true 6, step " << step << ")";
}

// ---------------------------------------------------------------- criterion 7

void criterion_lag(Criterion& c, const SynthStore& noisy) {
    Rng rng(12);
    for (int k : {1, 10, 50}) {
        const int n = 240;
        std::vector<double> base(n + k);
        for (auto& v : base) v = rng.normal();
        std::vector<double> x(n), y(n);
        for (int t = 0; t < n; ++t) {
            x[t] = base[t + k];
            y[t] = base[t];
        }
        const auto rep = analyze::lag_correlation(x, y, 60, "shift");
        c.expect(rep.best_lag == k, "shift " + std::to_string(k) + " detected as " + std::to_string(rep.best_lag));
        c.expect(near(rep.best_r, 1.0, 1e-9), "shift correlation not exact");
    }

    const int ghi = noisy.table.col_index("ghi");
    const int ti = noisy.table.target_index();
    c.expect(ghi >= 0, "ghi column missing");
    const auto rep = analyze::lag_correlation(noisy.table.column_values(ghi), noisy.table.column_values(ti), 80,
                                              "ghi");
    c.expect(std::abs(rep.best_lag - noisy.dataset.ghi_lag_days) <= 2,
             "ghi lag " + std::to_string(rep.best_lag) + " vs planted " +
                 std::to_string(noisy.dataset.ghi_lag_days));
    c.detail << "exact shifts 1/10/50; synth ghi lag " << rep.best_lag << " (planted "
             << noisy.dataset.ghi_lag_days << ", r " << rep.best_r << ")";
}

// ---------------------------------------------------------------- criterion 8

void criterion_pipeline(Criterion& c, const SynthStore& noisy) {
    const auto pre_lag = identify::lvkb(noisy.table, 0.88, 30.0, 0);

    auto table = stdb::add_lag_features(noisy.table, "load", {1, 2, 3, 4, 5, 6, 7});
    std::vector<std::string> lag_names;
    for (const auto& col : table.columns)
        if (col.name.rfind("load_lag_", 0) == 0) lag_names.push_back(col.name);
    const std::size_t before = table.cols();
    table = stdb::add_date_coefficients(table);
    std::vector<std::string> date_names;
    for (std::size_t i = before; i < table.cols(); ++i) date_names.push_back(table.columns[i].name);

    stdb::SchemeSpec s1{"S1", {}};
    s1.included.insert(s1.included.end(), date_names.begin(), date_names.end());
    s1.included.insert(s1.included.end(), lag_names.begin(), lag_names.end());
    stdb::SchemeSpec s5{"S5", s1.included};
    for (const auto& name : pre_lag.identified) s5.included.push_back(name);

    models::ModelSpec ridge;
    ridge.kind = models::Kind::ridge;
    ridge.lambda = 1e-3;
    models::ModelSpec gbrt;
    gbrt.kind = models::Kind::gbrt;
    models::ModelSpec mlp;
    mlp.kind = models::Kind::mlp;
    mlp.mlp.epochs = 1500;
    mlp.seed = 42;

    const stdb::DateRange train{Date::parse("2015-01-08"), Date::parse("2021-12-31")};
    const stdb::DateRange test{Date::parse("2022-01-01"), Date::parse("2023-03-18")};
    const auto report = models::compare_schemes(table, {s1, s5}, {ridge, gbrt, mlp}, train, test);

    for (const auto& kind : {"ridge", "gbrt", "mlp"}) {
        const double m1 = report.at("S1", kind).metrics.mape;
        const double m5 = report.at("S5", kind).metrics.mape;
        const double gain = (m1 - m5) / m1 * 100.0;
        c.expect(m5 < m1, std::string(kind) + ": S5 not better (S1 " + std::to_string(m1) + ", S5 " +
                              std::to_string(m5) + ")");
        c.expect(gain >= 15.0, std::string(kind) + ": improvement " + std::to_string(gain) + "% < 15%");
        c.detail << kind << " " << std::round(gain * 10) / 10 << "% ";
    }

    // analytic mlp gradient vs central differences
    Rng rng(6);
    const int n = 30, d = 4;
    std::vector<double> X(n * d), y(n);
    for (auto& v : X) v = rng.uniform(-1, 1);
    for (int r = 0; r < n; ++r) y[r] = std::cos(X[r * d]) * X[r * d + 2] - X[r * d + 3];
    auto net = models::MlpNet::init(d, 10, 3);
    const auto grad = net.gradient(X, n, y);
    double worst = 0;
    Rng pick(17);
    for (int probe = 0; probe < 80; ++probe) {
        const std::size_t i = pick.index(net.theta.size());
        const double eps = 1e-6, saved = net.theta[i];
        net.theta[i] = saved + eps;
        const double up = net.loss(X, n, y);
        net.theta[i] = saved - eps;
        const double down = net.loss(X, n, y);
        net.theta[i] = saved;
        const double fd = (up - down) / (2 * eps);
        worst = std::max(worst, std::abs(grad[i] - fd) / std::max(1.0, std::abs(fd)));
    }
    c.expect(worst <= 1e-4, "mlp gradient check worst rel err " + std::to_string(worst));
    c.detail << "| grad check " << worst;
}

// ---------------------------------------------------------------- criterion 9

int run_cli(const std::string& args) {
    const std::string cmd = std::string(DFD_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().filename() == "runlog.jsonl") continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        files[fs::relative(entry.path(), root).string()] = ss.str();
    }
    return files;
}

void criterion_rerun(Criterion& c) {
    const fs::path dir = fs::temp_directory_path() / ("dfd_acc_rerun_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream cfg(dir / "cfg.json");
        cfg << R"({
  "seed": 17, "out_dir": "out",
  "synth": {"days": 400, "noise": 1.0, "start": "2015-01-01", "dir": "synth"},
  "store": {"data_dir": "synth", "manifest": "synth/manifest.json", "target": "load", "impute_rounds": 3},
  "identify": {"variance_threshold": 0.88, "kbest_threshold": 30.0, "top_k": 0,
               "shapley_model": "ridge", "shapley_samples": 16},
  "lags": [1, 2, 3, 4, 5, 6, 7],
  "schemes": [{"id": "S1", "features": ["@date_coeffs", "@load_lags"]},
              {"id": "S2", "features": ["@date_coeffs", "@load_lags", "temp_max", "dew_point"]}],
  "models": [{"kind": "ridge", "lambda": 0.001}],
  "split": {"train": ["2015-01-08", "2015-11-30"], "test": ["2015-12-01", "2016-02-04"]},
  "sobol": {"n": 160, "model": "ridge"},
  "pdp": {"features": ["temp_max"], "grid": 11, "model": "ridge"},
  "lag": {"features": ["ghi"], "max_lag": 60}
})";
    }
    const std::string cfg = " --config " + (dir / "cfg.json").string();
    const std::vector<std::string> ops{"db synth",        "db ingest",    "db impute",   "identify features",
                                       "identify dims",   "forecast compare", "analyze sobol", "analyze pdp",
                                       "analyze lag",     "report"};
    for (const auto& op : ops)
        c.expect(run_cli(op + cfg) == 0, "first pass failed at '" + op + "'");
    const auto first = snapshot(dir);
    for (const auto& op : ops)
        c.expect(run_cli(op + cfg) == 0, "second pass failed at '" + op + "'");
    const auto second = snapshot(dir);

    c.expect(first.size() == second.size(), "artifact count changed between runs");
    c.expect(first.size() >= 15, "expected a full artifact set, saw " + std::to_string(first.size()));
    int same = 0;
    for (const auto& [path, bytes] : first) {
        const auto it = second.find(path);
        if (it == second.end()) {
            c.expect(false, "missing after re-run: " + path);
            continue;
        }
        if (it->second == bytes)
            ++same;
        else
            c.expect(false, "bytes differ: " + path);
    }
    c.detail << same << "/" << first.size() << " artifacts byte-identical across re-run";
    fs::remove_all(dir);
}

}  // namespace

int main() {
    SynthStore noisy, clean;

    struct Entry {
        int index;
        const char* name;
        double budget;
        std::function<void(Criterion&)> fn;
    };
    const std::vector<Entry> entries{
        {1, "dcw-brute-force", 1.0, [&](Criterion& c) { criterion_dcw(c); }},
        {2, "kmeans-optimum", 5.0, [&](Criterion& c) { criterion_kmeans(c); }},
        {3, "lvkb-planted", 10.0, [&](Criterion& c) { criterion_lvkb(c, noisy, clean); }},
        {4, "shapley", 30.0, [&](Criterion& c) { criterion_shapley(c, noisy); }},
        {5, "sobol-ishigami", 60.0, [&](Criterion& c) { criterion_sobol(c); }},
        {6, "pdp", 10.0, [&](Criterion& c) { criterion_pdp(c); }},
        {7, "lag-recovery", 10.0, [&](Criterion& c) { criterion_lag(c, noisy); }},
        {8, "scheme-uplift", 300.0, [&](Criterion& c) { criterion_pipeline(c, noisy); }},
        {9, "rerun-identical", 0.0, [&](Criterion& c) { criterion_rerun(c); }},
    };

    for (const auto& entry : entries) {
        Criterion c{entry.index, entry.name, entry.budget};
        try {
            entry.fn(c);
        } catch (const std::exception& e) {
            c.problems.push_back(std::string("exception: ") + e.what());
        }
        c.finish();
    }

    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 9 criteria passed\n");
    return 0;
}

#include "dfd/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "dfd/artifacts.hpp"
#include "dfd/csv.hpp"
#include "dfd/errors.hpp"
#include "dfd/rng.hpp"

namespace dfd::synth {

namespace {

constexpr double kTau = 2.0 * 3.14159265358979323846;
constexpr double kYear = 365.25;

// Annual cosine peaking at day-of-year `peak`.
double annual(double t_doy, double peak) { return std::cos(kTau * (t_doy - peak) / kYear); }

struct Gen {
    const Config& config;
    std::vector<double> doy;  // continuous day-of-year per index

    Rng stream(const std::string& name) const { return Rng(config.seed ^ artifacts::fnv1a64(name)); }

    std::vector<double> white(const std::string& name, double mean, double sd) const {
        Rng rng = stream(name);
        std::vector<double> out(config.days);
        for (auto& v : out) v = mean + sd * config.noise * rng.normal();
        return out;
    }

    std::vector<double> ar1(const std::string& name, double mean, double sd, double phi) const {
        Rng rng = stream(name);
        std::vector<double> out(config.days);
        double x = rng.normal() * sd;
        for (auto& v : out) {
            v = mean + x * config.noise;
            x = phi * x + sd * std::sqrt(1 - phi * phi) * rng.normal();
        }
        return out;
    }
};

struct Nuisance {
    const char* name;
    char kind;  // 'w' white, 'a' AR(1), 'l' low-variance white
    double mean, sd;
};

// Nuisance pools per dimension; exactly 8 low-variance entries overall.
const Nuisance kG[] = {{"humidity_res", 'w', 55, 4.0},   {"pressure_msl", 'a', 1013, 3.2}, {"cloud_octas", 'w', 4, 1.9},
                       {"visibility_km", 'w', 14, 3.1},  {"precip_mm", 'w', 3, 2.4},       {"snow_depth", 'a', 5, 2.8},
                       {"soil_temp_10cm", 'a', 12, 3.5}, {"soil_temp_50cm", 'a', 11, 2.6}, {"fog_hours", 'w', 2, 1.5},
                       {"hail_events", 'l', 0.2, 0.4},   {"gust_peak", 'w', 18, 4.4},      {"uv_residual", 'w', 3, 1.6},
                       {"evap_rate", 'a', 4, 1.8},       {"leaf_wetness", 'l', 1, 0.45},   {"ozone_dobson", 'a', 300, 5.0},
                       {"pm25_idx", 'w', 12, 3.8},       {"radon_idx", 'w', 40, 4.6},      {"frost_days", 'l', 0.5, 0.4},
                       {"thaw_index", 'a', 6, 2.2},      {"albedo_est", 'w', 30, 3.4},     {"runoff_idx", 'a', 8, 2.9},
                       {"moisture_def", 'w', 10, 3.3},   {"lightning_ct", 'w', 1.5, 1.7},  {"haze_idx", 'a', 9, 2.1}};
const Nuisance kA[] = {{"dni_residual", 'w', 120, 5.5}, {"dhi_residual", 'w', 80, 4.2},  {"moon_illum", 'a', 50, 4.8},
                       {"eclipse_flag", 'l', 0.1, 0.4}, {"airmass_noon", 'w', 2, 1.4},   {"solar_flux_107", 'a', 110, 4.1},
                       {"kp_index", 'w', 3, 1.8},       {"aurora_idx", 'l', 0.4, 0.45},  {"zenith_dust", 'a', 7, 2.3}};
const Nuisance kI[] = {{"coal_price", 'a', 60, 3.6},     {"oil_brent", 'a', 75, 4.3},      {"co2_allowance", 'a', 25, 2.7},
                       {"biomass_feed", 'w', 35, 3.0},   {"grid_losses", 'l', 4, 0.4},     {"import_balance", 'a', 12, 3.9},
                       {"pipeline_tariff", 'l', 2, 0.45}};
const Nuisance kS[] = {{"school_sessions", 'w', 60, 4.0}, {"retail_footfall", 'a', 100, 4.7}, {"traffic_idx", 'a', 70, 3.5},
                       {"hotel_occup", 'w', 55, 4.4},     {"festival_flag", 'l', 0.3, 0.42},  {"transit_rides", 'a', 80, 3.2},
                       {"cinema_sales", 'w', 25, 2.9},    {"parking_util", 'w', 45, 3.7}};

std::vector<std::pair<Date, std::optional<double>>> to_values(const Date& start, const std::vector<double>& raw,
                                                              Rng* missing_rng) {
    std::vector<std::pair<Date, std::optional<double>>> out;
    out.reserve(raw.size());
    for (std::size_t t = 0; t < raw.size(); ++t) {
        const bool drop = missing_rng && missing_rng->uniform() < 0.03;
        out.emplace_back(start + static_cast<int>(t), drop ? std::optional<double>{} : std::optional<double>{raw[t]});
    }
    return out;
}

}  // namespace

Dataset generate(const Config& config) {
    if (config.days < 400) throw ValidationError("synth: needs at least 400 days");
    if (config.noise < 0) throw ValidationError("synth: noise must be >= 0");
    if (config.g_count < 4 || config.a_count < 3 || config.i_count < 3 || config.s_count < 2)
        throw ValidationError("synth: per-dimension counts below the planted feature counts (G>=4 A>=3 I>=3 S>=2)");

    Gen gen{config, {}};
    gen.doy.resize(config.days);
    for (int t = 0; t < config.days; ++t) gen.doy[t] = (config.start + t).day_of_year();

    const int n = config.days;
    constexpr int kLag = 50;

    // --- planted geography ---
    std::vector<double> temp_max(n), temp_mean(n), dew_point(n), wind_speed(n);
    {
        Rng r1 = gen.stream("temp_max"), r2 = gen.stream("temp_mean"), r3 = gen.stream("dew_point"),
            r4 = gen.stream("wind_speed");
        for (int t = 0; t < n; ++t) {
            // temperature peaks ~50 days after peak irradiance (heat accumulation)
            const double season = annual(gen.doy[t], 172 + kLag);
            temp_max[t] = 62 + 22 * season + 6.0 * config.noise * r1.normal();
            temp_mean[t] = 55 + 18 * season + 5.0 * config.noise * r2.normal();
            dew_point[t] = 0.75 * temp_mean[t] + 2.0 * std::sin(kTau * gen.doy[t] / kYear + 0.8) - 8 +
                           3.0 * config.noise * r3.normal();
            wind_speed[t] = 8 + 2.0 * annual(gen.doy[t], 172 + kLag) +
                            2.0 * std::sin(3 * kTau * gen.doy[t] / kYear + 1.0) + 1.6 * config.noise * r4.normal();
        }
    }

    // --- planted astronomy (ghi generated with lead days so load can look back) ---
    std::vector<double> ghi_full(n + kLag), sza(n), twilight(n);
    {
        Rng r1 = gen.stream("ghi"), r2 = gen.stream("sza"), r3 = gen.stream("civil_twilight");
        for (int t = -kLag; t < n; ++t) {
            const double d = (config.start + t).day_of_year();
            ghi_full[t + kLag] = 500 + 180 * annual(d, 172) + 45.0 * config.noise * r1.normal();
        }
        for (int t = 0; t < n; ++t) {
            sza[t] = 35 - 16 * annual(gen.doy[t], 172) + 1.2 * config.noise * r2.normal();
            twilight[t] = 42 + 9 * annual(gen.doy[t], 172) + 1.5 * config.noise * r3.normal();
        }
    }
    std::vector<double> ghi(ghi_full.begin() + kLag, ghi_full.end());

    // --- planted integrated energy (seasonal phase tied to the demand season) ---
    std::vector<double> methane(n), propane(n), gas_daily(n);
    {
        std::vector<double> m_ar = gen.ar1("methane_price", 0, 1.1, 0.7);
        std::vector<double> p_ar = gen.ar1("propane_price", 0, 0.9, 0.7);
        std::vector<double> g_ar = gen.ar1("gas_consumption", 0, 1.0, 0.6);
        for (int t = 0; t < n; ++t) {
            methane[t] = 10 + 2.2 * annual(gen.doy[t], 172 + kLag) + m_ar[t];
            propane[t] = 12 - 1.8 * annual(gen.doy[t], 172 + kLag) + p_ar[t];
            gas_daily[t] = 20 - 2.6 * annual(gen.doy[t], 172 + kLag) + g_ar[t];
        }
    }

    // --- planted society ---
    std::vector<double> weekend_depth(n), event_intensity(n, 0.0);
    {
        Rng spikes = gen.stream("event_intensity/spikes");
        for (int t = 0; t < n; ++t) {
            const int dow = (config.start + t).weekday();  // 0 = Monday
            weekend_depth[t] = dow <= 4 ? 3.0 : (dow == 5 ? 2.5 : 0.0);
            const double u = spikes.uniform();
            if (u < 0.08) event_intensity[t] = 5 + 6 * spikes.uniform();
        }
    }

    // --- load ---
    std::vector<double> load(n);
    {
        Rng noise = gen.stream("load");
        for (int t = 0; t < n; ++t) {
            const double g = 1.8 * std::max(temp_max[t] - 70.0, 0.0) + 0.8 * std::max(70.0 - temp_max[t], 0.0) +
                             0.35 * (temp_mean[t] - 55) + 0.25 * (dew_point[t] - 48) + 0.9 * (wind_speed[t] - 8);
            const double a = 0.04 * (ghi_full[t] - 500) + 0.5 * std::max(sza[t] - 35.0, 0.0) +
                             0.2 * std::max(35.0 - sza[t], 0.0) + 0.25 * (twilight[t] - 42);
            const double i = 9.0 * (methane[t] - 10) - 5.0 * (propane[t] - 12) - 3.5 * (gas_daily[t] - 20);
            const double s = 5.0 * weekend_depth[t] - 2.5 * event_intensity[t];
            load[t] = 1000 + g + a + i + s + 4.0 * config.noise * noise.normal();
        }
    }

    Dataset out;
    out.dominant_dimension = "I";
    out.ghi_lag_days = kLag;
    out.planted = {"temp_max",      "temp_mean",    "dew_point",       "wind_speed",   "ghi",          "sza",
                   "civil_twilight", "methane_price", "propane_price", "gas_consumption", "weekend_depth",
                   "event_intensity"};

    auto push = [&](const std::string& name, stdb::Dimension dim, const std::string& unit,
                    const std::vector<double>& raw, bool gaps) {
        stdb::FeatureSeries s;
        s.name = name;
        s.dimension = dim;
        s.unit = unit;
        s.cadence = stdb::Cadence::daily;
        Rng missing = gen.stream(name + "/missing");
        s.values = to_values(config.start, raw, gaps ? &missing : nullptr);
        out.features.push_back(std::move(s));
    };

    push("temp_max", stdb::Dimension::G, "degF", temp_max, false);
    push("temp_mean", stdb::Dimension::G, "degF", temp_mean, false);
    push("dew_point", stdb::Dimension::G, "degF", dew_point, true);
    push("wind_speed", stdb::Dimension::G, "m/s", wind_speed, false);
    push("ghi", stdb::Dimension::A, "W/m2", ghi, false);
    push("sza", stdb::Dimension::A, "deg", sza, false);
    push("civil_twilight", stdb::Dimension::A, "min", twilight, false);
    push("methane_price", stdb::Dimension::I, "USD/MMBtu", methane, false);
    push("propane_price", stdb::Dimension::I, "USD/gal", propane, true);

    // gas consumption is reported monthly: first-of-month snapshots of the daily driver
    {
        stdb::FeatureSeries s;
        s.name = "gas_consumption";
        s.dimension = stdb::Dimension::I;
        s.unit = "PJ";
        s.cadence = stdb::Cadence::monthly;
        for (int t = 0; t < n; ++t) {
            const Date d = config.start + t;
            if (d.day() == 1) s.values.emplace_back(d, gas_daily[t]);
        }
        out.features.push_back(std::move(s));
    }

    push("weekend_depth", stdb::Dimension::S, "1", weekend_depth, false);
    push("event_intensity", stdb::Dimension::S, "1", event_intensity, false);

    auto fill_nuisance = [&](const Nuisance* pool, int pool_size, int wanted, stdb::Dimension dim) {
        for (int i = 0; i < wanted; ++i) {
            std::string name;
            const Nuisance* spec = nullptr;
            if (i < pool_size) {
                spec = &pool[i];
                name = spec->name;
            } else {
                name = std::string(1, static_cast<char>(std::tolower(stdb::dimension_char(dim)))) + "_extra_" +
                       std::to_string(i - pool_size + 1);
            }
            std::vector<double> raw;
            if (!spec) {
                raw = gen.white(name, 10, 3.0);
            } else if (spec->kind == 'a') {
                raw = gen.ar1(name, spec->mean, spec->sd, 0.6);
            } else {
                raw = gen.white(name, spec->mean, spec->sd);
            }
            const bool gaps = name == "dew_point" || name == "coal_price" || name == "retail_footfall" ||
                              name == "humidity_res" || name == "dni_residual";
            push(name, dim, "1", raw, gaps);
        }
    };
    fill_nuisance(kG, static_cast<int>(std::size(kG)), config.g_count - 4, stdb::Dimension::G);
    fill_nuisance(kA, static_cast<int>(std::size(kA)), config.a_count - 3, stdb::Dimension::A);
    fill_nuisance(kI, static_cast<int>(std::size(kI)), config.i_count - 3, stdb::Dimension::I);
    fill_nuisance(kS, static_cast<int>(std::size(kS)), config.s_count - 2, stdb::Dimension::S);

    out.load.name = "load";
    out.load.dimension = stdb::Dimension::L;
    out.load.unit = "MW";
    out.load.cadence = stdb::Cadence::daily;
    out.load.values = to_values(config.start, load, nullptr);
    return out;
}

std::vector<std::filesystem::path> write_dataset(const Config& config, const std::filesystem::path& dir,
                                                 const std::string& csv_header, const std::string& json_header) {
    const Dataset data = generate(config);

    std::vector<std::filesystem::path> written;
    auto write_series = [&](const stdb::FeatureSeries& s) {
        std::ostringstream out;
        out << csv_header << "date,value\n";
        for (const auto& [date, value] : s.values) {
            out << date.iso() << ",";
            if (value) out << csv::format_double(*value);
            out << "\n";
        }
        const auto path = dir / (s.name + ".csv");
        csv::write_file(path, out.str());
        written.push_back(path);
    };

    nlohmann::json manifest = nlohmann::json::array();
    for (const auto& s : data.features) {
        write_series(s);
        manifest.push_back({{"file", s.name + ".csv"},
                            {"name", s.name},
                            {"dimension", std::string(1, stdb::dimension_char(s.dimension))},
                            {"unit", s.unit},
                            {"cadence", s.cadence == stdb::Cadence::monthly ? "monthly" : "daily"}});
    }
    write_series(data.load);
    manifest.push_back({{"file", "load.csv"},
                        {"name", "load"},
                        {"dimension", "L"},
                        {"unit", data.load.unit},
                        {"cadence", "daily"}});
    csv::write_file(dir / "manifest.json", json_header + manifest.dump(2) + "\n");
    written.push_back(dir / "manifest.json");

    nlohmann::json truth;
    truth["days"] = config.days;
    truth["start"] = config.start.iso();
    truth["noise"] = config.noise;
    truth["seed"] = config.seed;
    truth["planted"] = data.planted;
    truth["dominant_dimension"] = data.dominant_dimension;
    truth["lag"] = {{"feature", "ghi"}, {"days", data.ghi_lag_days}};
    truth["target"] = {{"name", "load"}, {"base", 1000.0}};
    truth["forms"] = {
        {"temp_max", "V-shape pivot 70 (slopes 1.8 above / 0.8 below)"},
        {"temp_mean", "linear 0.35 about 55"},
        {"dew_point", "linear 0.25 about 48"},
        {"wind_speed", "linear 0.9 about 8"},
        {"ghi", "linear 0.04 about 500, lagged 50 days"},
        {"sza", "V-shape pivot 35 (slopes 0.5 above / 0.2 below)"},
        {"civil_twilight", "linear 0.25 about 42"},
        {"methane_price", "linear 9.0 about 10"},
        {"propane_price", "linear -5.0 about 12"},
        {"gas_consumption", "linear -3.5 about 20 (reported monthly)"},
        {"weekend_depth", "linear 5.0 (weekday step)"},
        {"event_intensity", "linear -2.5 (sparse spikes)"},
    };
    csv::write_file(dir / "ground_truth.json", json_header + truth.dump(2) + "\n");
    written.push_back(dir / "ground_truth.json");

    std::sort(written.begin(), written.end());
    return written;
}

}  // namespace dfd::synth

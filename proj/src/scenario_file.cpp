#include "edr/io.hpp"

#include "io_text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <string>

namespace edr::io {
namespace {

namespace fs = std::filesystem;
using detail::parse_double;
using detail::trim;

const std::set<std::string, std::less<>> kKnownKeys = {
    "time.step_minutes",
    "edr.notification",
    "edr.decision_window_hours",
    "edr.event_start",
    "edr.event_end",
    "edr.incentive_price_mwh",
    "edr.incentive_price_csv",
    "edr.min_reduction_kw",
    "edr.min_reduction_csv",
    "station.k_ev",
    "station.forecast_csv",
    "station.grid_price_csv",
    "bes.rated_capacity_kwh",
    "bes.max_discharge_kw",
    "bes.max_charge_kw",
    "bes.discharge_eff",
    "bes.charge_eff",
    "bes.soc_min",
    "bes.soc_max",
    "bes.initial_soc",
    "bes.terminal_soc_min",
};

struct Entry {
    std::string value;
    std::size_t line;
};

class ConfigFile {
public:
    explicit ConfigFile(const fs::path& path) : path_(path), dir_(path.parent_path())
    {
        std::ifstream in(path);
        if (!in) {
            throw InputError(fmt::format("{}: cannot open file", path.string()));
        }
        std::string raw;
        std::size_t number = 0;
        while (std::getline(in, raw)) {
            ++number;
            std::string_view line = raw;
            if (const auto hash = line.find('#'); hash != std::string_view::npos) {
                line = line.substr(0, hash);
            }
            line = trim(line);
            if (line.empty()) {
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                fail(number, "expected 'key = value'");
            }
            const std::string key{trim(line.substr(0, eq))};
            const std::string value{trim(line.substr(eq + 1))};
            if (!kKnownKeys.contains(key)) {
                fail(number, fmt::format("unknown key '{}'", key));
            }
            if (value.empty()) {
                fail(number, fmt::format("{}: empty value", key));
            }
            const auto [it, fresh] = entries_.emplace(key, Entry{value, number});
            if (!fresh) {
                fail(number, fmt::format("{}: duplicate key (first set on line {})", key, it->second.line));
            }
        }
    }

    [[noreturn]] void fail(std::size_t line, std::string_view what) const
    {
        throw InputError(fmt::format("{}:{}: {}", path_.string(), line, what));
    }

    bool has(std::string_view key) const { return entries_.find(std::string{key}) != entries_.end(); }

    const Entry& entry(std::string_view key) const
    {
        const auto it = entries_.find(std::string{key});
        if (it == entries_.end()) {
            throw InputError(fmt::format("{}: missing key '{}'", path_.string(), key));
        }
        return it->second;
    }

    double number(std::string_view key) const
    {
        const Entry& e = entry(key);
        const auto v = parse_double(e.value);
        if (!v) {
            fail(e.line, fmt::format("{}: '{}' is not a finite number", key, e.value));
        }
        return *v;
    }

    ClockTime time(std::string_view key) const
    {
        const Entry& e = entry(key);
        try {
            return ClockTime::parse(e.value);
        } catch (const DomainError&) {
            fail(e.line, fmt::format("{}: '{}' is not an HH:MM time", key, e.value));
        }
    }

    std::chrono::minutes minutes_from(std::string_view key, double scale) const
    {
        const Entry& e = entry(key);
        const double m = number(key) * scale;
        const double r = std::round(m);
        if (std::abs(m - r) > 1e-6 || r > 1440.0 || r < -1440.0) {
            fail(e.line, fmt::format("{}: '{}' is not a whole number of minutes", key, e.value));
        }
        return std::chrono::minutes{static_cast<long>(r)};
    }

    fs::path csv_path(std::string_view key) const
    {
        const fs::path p{entry(key).value};
        return p.is_absolute() ? p : dir_ / p;
    }

    /// Exactly one of the two keys must be present.
    void require_one(std::string_view a, std::string_view b) const
    {
        if (has(a) == has(b)) {
            throw InputError(fmt::format("{}: exactly one of '{}' and '{}' must be set", path_.string(), a, b));
        }
    }

private:
    fs::path path_;
    fs::path dir_;
    std::map<std::string, Entry, std::less<>> entries_;
};

std::vector<double> to_per_kwh(std::vector<double> mwh)
{
    for (double& v : mwh) {
        v = price_per_kwh(v);
    }
    return mwh;
}

/// A $/MWh value that converts back to exactly `per_kwh`.
double mwh_for(double per_kwh)
{
    const double guess = per_kwh * 1000.0;
    double up = guess;
    double down = guess;
    for (int i = 0; i < 16; ++i) {
        if (up / 1000.0 == per_kwh) {
            return up;
        }
        if (down / 1000.0 == per_kwh) {
            return down;
        }
        up = std::nextafter(up, INFINITY);
        down = std::nextafter(down, -INFINITY);
    }
    throw std::logic_error(fmt::format("write_scenario: price {} $/kWh has no exact $/MWh form", per_kwh));
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InputError(fmt::format("{}: cannot write file", path.string()));
    }
    out << text;
    if (!out) {
        throw InputError(fmt::format("{}: write failed", path.string()));
    }
}

void write_series(const fs::path& path, const TimeGrid& grid, std::span<const double> values)
{
    std::string text = "time,value\n";
    for (std::size_t k = 0; k < values.size(); ++k) {
        text += fmt::format("{},{}\n", grid.time_at(k).to_string(), values[k]);
    }
    write_text(path, text);
}

bool constant(std::span<const double> v)
{
    return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>{}) == v.end();
}

}  // namespace

Scenario load_scenario(const fs::path& config_path)
{
    const ConfigFile cfg(config_path);

    const auto step = cfg.minutes_from("time.step_minutes", 1.0);
    const ClockTime notification = cfg.time("edr.notification");
    const auto window = cfg.minutes_from("edr.decision_window_hours", 60.0);
    const ClockTime start = cfg.time("edr.event_start");
    const ClockTime end = cfg.time("edr.event_end");
    const TimeGrid grid = make_time_grid(start, end - start, step);

    cfg.require_one("edr.incentive_price_mwh", "edr.incentive_price_csv");
    cfg.require_one("edr.min_reduction_kw", "edr.min_reduction_csv");

    std::vector<double> incentive =
        cfg.has("edr.incentive_price_csv")
            ? to_per_kwh(load_timeseries_csv(cfg.csv_path("edr.incentive_price_csv"), grid))
            : std::vector<double>(grid.steps(), price_per_kwh(cfg.number("edr.incentive_price_mwh")));
    std::vector<double> min_reduction =
        cfg.has("edr.min_reduction_csv")
            ? load_timeseries_csv(cfg.csv_path("edr.min_reduction_csv"), grid)
            : std::vector<double>(grid.steps(), cfg.number("edr.min_reduction_kw"));
    if (notification + window != start) {
        throw DomainError(fmt::format("edr.event_start: {} must equal notification {} plus the {}-minute decision window",
                                      start.to_string(), notification.to_string(), window.count()));
    }
    EdrSignal edr(grid, std::move(incentive), std::move(min_reduction), notification, window);

    PriceSeries prices(grid, to_per_kwh(load_timeseries_csv(cfg.csv_path("station.grid_price_csv"), grid)));
    LoadForecast forecast(grid, load_timeseries_csv(cfg.csv_path("station.forecast_csv"), grid));

    BesSpec bes;
    bes.rated_capacity_kwh = cfg.number("bes.rated_capacity_kwh");
    bes.max_discharge_kw = cfg.number("bes.max_discharge_kw");
    bes.max_charge_kw = cfg.number("bes.max_charge_kw");
    bes.discharge_eff = cfg.number("bes.discharge_eff");
    bes.charge_eff = cfg.number("bes.charge_eff");
    bes.soc_min = cfg.number("bes.soc_min");
    bes.soc_max = cfg.number("bes.soc_max");
    bes.initial_soc = cfg.number("bes.initial_soc");
    if (cfg.has("bes.terminal_soc_min")) {
        bes.terminal_soc_min = cfg.number("bes.terminal_soc_min");
    }

    StationConfig station;
    station.ev_price_multiplier = cfg.number("station.k_ev");

    return Scenario(grid, std::move(prices), std::move(forecast), std::move(edr), bes, station);
}

void write_scenario(const Scenario& s, const fs::path& config_path)
{
    const fs::path dir = config_path.parent_path();
    const std::string stem = config_path.stem().string();
    const TimeGrid& grid = s.grid();
    auto sibling = [&](std::string_view what) { return fmt::format("{}_{}.csv", stem, what); };
    auto mwh = [](std::span<const double> per_kwh) {
        std::vector<double> out;
        for (double v : per_kwh) {
            out.push_back(mwh_for(v));
        }
        return out;
    };

    std::string text;
    text += fmt::format("time.step_minutes = {}\n", grid.step().count());
    text += fmt::format("edr.notification = {}\n", s.edr().notification_time().to_string());
    text += fmt::format("edr.decision_window_hours = {}\n",
                        static_cast<double>(s.edr().decision_window().count()) / 60.0);
    text += fmt::format("edr.event_start = {}\n", grid.start().to_string());
    text += fmt::format("edr.event_end = {}\n", grid.end().to_string());

    const auto incentive = s.edr().incentive_price();
    if (constant(incentive)) {
        text += fmt::format("edr.incentive_price_mwh = {}\n", mwh_for(incentive.front()));
    } else {
        write_series(dir / sibling("incentive_price"), grid, mwh(incentive));
        text += fmt::format("edr.incentive_price_csv = {}\n", sibling("incentive_price"));
    }
    const auto min_reduction = s.edr().min_reduction();
    if (constant(min_reduction)) {
        text += fmt::format("edr.min_reduction_kw = {}\n", min_reduction.front());
    } else {
        write_series(dir / sibling("min_reduction"), grid, min_reduction);
        text += fmt::format("edr.min_reduction_csv = {}\n", sibling("min_reduction"));
    }

    write_series(dir / sibling("forecast"), grid, s.forecast().values());
    write_series(dir / sibling("grid_price"), grid, mwh(s.prices().values()));
    text += fmt::format("station.k_ev = {}\n", s.station().ev_price_multiplier);
    text += fmt::format("station.forecast_csv = {}\n", sibling("forecast"));
    text += fmt::format("station.grid_price_csv = {}\n", sibling("grid_price"));

    const BesSpec& b = s.bes();
    text += fmt::format("bes.rated_capacity_kwh = {}\n", b.rated_capacity_kwh);
    text += fmt::format("bes.max_discharge_kw = {}\n", b.max_discharge_kw);
    text += fmt::format("bes.max_charge_kw = {}\n", b.max_charge_kw);
    text += fmt::format("bes.discharge_eff = {}\n", b.discharge_eff);
    text += fmt::format("bes.charge_eff = {}\n", b.charge_eff);
    text += fmt::format("bes.soc_min = {}\n", b.soc_min);
    text += fmt::format("bes.soc_max = {}\n", b.soc_max);
    text += fmt::format("bes.initial_soc = {}\n", b.initial_soc);
    if (b.terminal_soc_min) {
        text += fmt::format("bes.terminal_soc_min = {}\n", *b.terminal_soc_min);
    }
    write_text(config_path, text);
}

}  // namespace edr::io

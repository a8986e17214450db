#pragma once

// Domain types for one demand-response decision.
//
// Internal units are fixed: power in kW, energy in kWh, money in $, prices in
// $/kWh and state of charge as a fraction of rated capacity. Files may quote
// prices in $/MWh; conversion happens in the I/O layer via price_per_kwh().
//
// Every type validates itself on construction and is immutable afterwards.

#include <chrono>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace edr {

/// Raised when a value violates a domain invariant. The message names the field.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Naive wall-clock time, minutes since midnight in [0, 1440].
class ClockTime {
public:
    constexpr ClockTime() = default;
    explicit ClockTime(int minutes_since_midnight);

    /// Parses "HH:MM" (24-hour). "24:00" is accepted as the end of day.
    static ClockTime parse(std::string_view text);

    constexpr int minutes() const noexcept { return minutes_; }
    std::string to_string() const;

    friend constexpr auto operator<=>(ClockTime, ClockTime) = default;

private:
    int minutes_ = 0;
};

ClockTime operator+(ClockTime t, std::chrono::minutes d);
std::chrono::minutes operator-(ClockTime a, ClockTime b);

/// The discrete event window: `steps` slots of `step` width starting at `start`.
class TimeGrid {
public:
    ClockTime start() const noexcept { return start_; }
    ClockTime end() const noexcept { return start_ + horizon_; }
    std::chrono::minutes horizon() const noexcept { return horizon_; }
    std::chrono::minutes step() const noexcept { return step_; }
    std::size_t steps() const noexcept { return steps_; }

    /// Step width in hours.
    double step_hours() const noexcept { return static_cast<double>(step_.count()) / 60.0; }
    double horizon_hours() const noexcept { return static_cast<double>(horizon_.count()) / 60.0; }

    ClockTime time_at(std::size_t step_index) const;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    friend TimeGrid make_time_grid(ClockTime, std::chrono::minutes, std::chrono::minutes);
    TimeGrid(ClockTime start, std::chrono::minutes horizon, std::chrono::minutes step);

    ClockTime start_;
    std::chrono::minutes horizon_{};
    std::chrono::minutes step_{};
    std::size_t steps_ = 0;
};

/// Throws DomainError unless horizon > 0, step > 0, step divides horizon and
/// the window stays within one day.
TimeGrid make_time_grid(ClockTime start, std::chrono::minutes horizon, std::chrono::minutes step);

/// $/MWh to $/kWh. Throws DomainError for negative or non-finite input.
double price_per_kwh(double dollars_per_mwh);

/// Grid purchase price per step, $/kWh.
class PriceSeries {
public:
    PriceSeries(const TimeGrid& grid, std::vector<double> per_kwh, std::string currency = "$");

    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t t) const { return values_.at(t); }
    std::size_t size() const noexcept { return values_.size(); }
    const std::string& currency() const noexcept { return currency_; }

    /// Every value multiplied by `factor` (>= 0).
    PriceSeries scaled(double factor) const;

    friend bool operator==(const PriceSeries&, const PriceSeries&) = default;

private:
    std::vector<double> values_;
    std::string currency_;
};

/// Short-term forecast of station charging demand per step, kW.
class LoadForecast {
public:
    LoadForecast(const TimeGrid& grid, std::vector<double> kw);

    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t t) const { return values_.at(t); }
    std::size_t size() const noexcept { return values_.size(); }

    friend bool operator==(const LoadForecast&, const LoadForecast&) = default;

private:
    std::vector<double> values_;
};

/// What the system operator sends with an emergency event notification.
class EdrSignal {
public:
    EdrSignal(const TimeGrid& grid,
              std::vector<double> incentive_per_kwh,
              std::vector<double> min_reduction_kw,
              ClockTime notification,
              std::chrono::minutes decision_window);

    std::span<const double> incentive_price() const noexcept { return incentive_; }
    std::span<const double> min_reduction() const noexcept { return min_reduction_; }
    ClockTime notification_time() const noexcept { return notification_; }
    std::chrono::minutes decision_window() const noexcept { return decision_window_; }

    friend bool operator==(const EdrSignal&, const EdrSignal&) = default;

private:
    std::vector<double> incentive_;
    std::vector<double> min_reduction_;
    ClockTime notification_;
    std::chrono::minutes decision_window_{};
};

/// Station battery. Efficiencies follow the SOC-update sign convention:
/// discharging drains `discharge_eff` per delivered kWh (>= 1) and charging
/// stores `charge_eff` per purchased kWh (<= 1).
struct BesSpec {
    double rated_capacity_kwh = 0.0;
    double max_discharge_kw = 0.0;
    double max_charge_kw = 0.0;
    double discharge_eff = 1.0;
    double charge_eff = 1.0;
    double soc_min = 0.0;
    double soc_max = 1.0;
    double initial_soc = 0.0;
    /// Optional end-of-event floor on SOC. Off by default.
    std::optional<double> terminal_soc_min;

    void validate() const;

    friend bool operator==(const BesSpec&, const BesSpec&) = default;
};

struct StationConfig {
    /// EV retail price = multiplier * grid price; must exceed 1.
    double ev_price_multiplier = 3.0;

    void validate() const;

    friend bool operator==(const StationConfig&, const StationConfig&) = default;
};

/// Per-step EV retail price, K_EV times the grid price.
PriceSeries ev_price(const PriceSeries& grid_price, const StationConfig& station);

/// Everything needed for one participation decision, aligned to one grid.
class Scenario {
public:
    Scenario(TimeGrid grid, PriceSeries prices, LoadForecast forecast, EdrSignal edr, BesSpec bes,
             StationConfig station);

    const TimeGrid& grid() const noexcept { return grid_; }
    const PriceSeries& prices() const noexcept { return prices_; }
    const LoadForecast& forecast() const noexcept { return forecast_; }
    const EdrSignal& edr() const noexcept { return edr_; }
    const BesSpec& bes() const noexcept { return bes_; }
    const StationConfig& station() const noexcept { return station_; }

    std::size_t steps() const noexcept { return grid_.steps(); }
    double dt_hours() const noexcept { return grid_.step_hours(); }

    Scenario with_bes(BesSpec bes) const;
    Scenario with_edr(EdrSignal edr) const;
    Scenario with_prices(PriceSeries prices) const;
    Scenario with_forecast(LoadForecast forecast) const;

    friend bool operator==(const Scenario&, const Scenario&) = default;

private:
    TimeGrid grid_;
    PriceSeries prices_;
    LoadForecast forecast_;
    EdrSignal edr_;
    BesSpec bes_;
    StationConfig station_;
};

}  // namespace edr

#include "edr/domain.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

namespace edr {
namespace {

constexpr int kMinutesPerDay = 24 * 60;

void check_series(std::string_view field, std::span<const double> values, const TimeGrid& grid)
{
    if (values.size() != grid.steps()) {
        throw DomainError(fmt::format("{}: has {} values but the time grid has {} steps", field,
                                      values.size(), grid.steps()));
    }
    for (std::size_t t = 0; t < values.size(); ++t) {
        if (!std::isfinite(values[t]) || values[t] < 0.0) {
            throw DomainError(
                fmt::format("{}: value {} at step {} must be finite and >= 0", field, values[t], t));
        }
    }
}

void check_fraction(std::string_view field, double v)
{
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw DomainError(fmt::format("{}: {} is not a fraction in [0, 1]", field, v));
    }
}

void check_nonnegative(std::string_view field, double v)
{
    if (!std::isfinite(v) || v < 0.0) {
        throw DomainError(fmt::format("{}: {} must be finite and >= 0", field, v));
    }
}

}  // namespace

ClockTime::ClockTime(int minutes_since_midnight) : minutes_(minutes_since_midnight)
{
    if (minutes_since_midnight < 0 || minutes_since_midnight > kMinutesPerDay) {
        throw DomainError(fmt::format("clock time: {} minutes is outside 00:00-24:00",
                                      minutes_since_midnight));
    }
}

ClockTime ClockTime::parse(std::string_view text)
{
    const auto colon = text.find(':');
    if (colon == std::string_view::npos || colon == 0 || text.size() - colon != 3) {
        throw DomainError(fmt::format("clock time: '{}' is not HH:MM", text));
    }
    auto to_int = [&](std::string_view part) {
        int v = 0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc{} || ptr != part.data() + part.size()) {
            throw DomainError(fmt::format("clock time: '{}' is not HH:MM", text));
        }
        return v;
    };
    const int hh = to_int(text.substr(0, colon));
    const int mm = to_int(text.substr(colon + 1));
    if (hh < 0 || hh > 24 || mm < 0 || mm > 59 || (hh == 24 && mm != 0)) {
        throw DomainError(fmt::format("clock time: '{}' is out of range", text));
    }
    return ClockTime{hh * 60 + mm};
}

std::string ClockTime::to_string() const
{
    return fmt::format("{:02}:{:02}", minutes_ / 60, minutes_ % 60);
}

ClockTime operator+(ClockTime t, std::chrono::minutes d)
{
    return ClockTime{t.minutes() + static_cast<int>(d.count())};
}

std::chrono::minutes operator-(ClockTime a, ClockTime b)
{
    return std::chrono::minutes{a.minutes() - b.minutes()};
}

TimeGrid::TimeGrid(ClockTime start, std::chrono::minutes horizon, std::chrono::minutes step)
    : start_(start), horizon_(horizon), step_(step),
      steps_(static_cast<std::size_t>(horizon.count() / step.count()))
{
}

ClockTime TimeGrid::time_at(std::size_t step_index) const
{
    if (step_index > steps_) {
        throw std::out_of_range(fmt::format("time grid: step {} beyond {}", step_index, steps_));
    }
    return start_ + step_ * static_cast<long>(step_index);
}

TimeGrid make_time_grid(ClockTime start, std::chrono::minutes horizon, std::chrono::minutes step)
{
    if (horizon.count() <= 0) {
        throw DomainError("time grid: horizon must be positive");
    }
    if (step.count() <= 0) {
        throw DomainError("time grid: step must be positive");
    }
    if (horizon.count() % step.count() != 0) {
        throw DomainError(fmt::format("time grid: step of {} min does not divide horizon of {} min",
                                      step.count(), horizon.count()));
    }
    if (start.minutes() + horizon.count() > kMinutesPerDay) {
        throw DomainError(fmt::format("time grid: window starting {} runs past midnight",
                                      start.to_string()));
    }
    return TimeGrid{start, horizon, step};
}

double price_per_kwh(double dollars_per_mwh)
{
    if (!std::isfinite(dollars_per_mwh) || dollars_per_mwh < 0.0) {
        throw DomainError(fmt::format("price: {} $/MWh must be finite and >= 0", dollars_per_mwh));
    }
    return dollars_per_mwh / 1000.0;
}

PriceSeries::PriceSeries(const TimeGrid& grid, std::vector<double> per_kwh, std::string currency)
    : values_(std::move(per_kwh)), currency_(std::move(currency))
{
    check_series("grid_price", values_, grid);
}

LoadForecast::LoadForecast(const TimeGrid& grid, std::vector<double> kw) : values_(std::move(kw))
{
    check_series("forecast", values_, grid);
}

EdrSignal::EdrSignal(const TimeGrid& grid,
                     std::vector<double> incentive_per_kwh,
                     std::vector<double> min_reduction_kw,
                     ClockTime notification,
                     std::chrono::minutes decision_window)
    : incentive_(std::move(incentive_per_kwh)), min_reduction_(std::move(min_reduction_kw)),
      notification_(notification), decision_window_(decision_window)
{
    check_series("edr.incentive_price", incentive_, grid);
    check_series("edr.min_reduction", min_reduction_, grid);
    if (decision_window.count() < 0) {
        throw DomainError("edr.decision_window: must be >= 0");
    }
    if (notification.minutes() + decision_window.count() != grid.start().minutes()) {
        throw DomainError(fmt::format(
            "edr.notification: {} plus a {} min decision window does not reach the event start {}",
            notification.to_string(), decision_window.count(), grid.start().to_string()));
    }
}

void BesSpec::validate() const
{
    check_nonnegative("bes.rated_capacity_kwh", rated_capacity_kwh);
    check_nonnegative("bes.max_discharge_kw", max_discharge_kw);
    check_nonnegative("bes.max_charge_kw", max_charge_kw);
    check_fraction("bes.soc_min", soc_min);
    check_fraction("bes.soc_max", soc_max);
    check_fraction("bes.initial_soc", initial_soc);
    if (soc_min > soc_max) {
        throw DomainError(fmt::format("bes.soc_min: {} exceeds soc_max {}", soc_min, soc_max));
    }
    if (initial_soc < soc_min) {
        throw DomainError(fmt::format("bes.initial_soc: {} is below soc_min {}", initial_soc, soc_min));
    }
    if (initial_soc > soc_max) {
        throw DomainError(fmt::format("bes.initial_soc: {} exceeds soc_max {}", initial_soc, soc_max));
    }
    if (!std::isfinite(discharge_eff) || discharge_eff < 1.0) {
        throw DomainError(fmt::format("bes.discharge_eff: {} must be >= 1", discharge_eff));
    }
    if (!std::isfinite(charge_eff) || charge_eff <= 0.0 || charge_eff > 1.0) {
        throw DomainError(fmt::format("bes.charge_eff: {} must be in (0, 1]", charge_eff));
    }
    if (terminal_soc_min) {
        const double v = *terminal_soc_min;
        if (!std::isfinite(v) || v < soc_min || v > soc_max) {
            throw DomainError(
                fmt::format("bes.terminal_soc_min: {} is outside [soc_min, soc_max]", v));
        }
    }
}

void StationConfig::validate() const
{
    if (!std::isfinite(ev_price_multiplier) || ev_price_multiplier <= 1.0) {
        throw DomainError(
            fmt::format("station.k_ev: {} must be greater than 1", ev_price_multiplier));
    }
}

PriceSeries PriceSeries::scaled(double factor) const
{
    if (!std::isfinite(factor) || factor < 0.0) {
        throw DomainError(fmt::format("price scale factor {} must be finite and >= 0", factor));
    }
    PriceSeries out = *this;
    for (double& v : out.values_) {
        v *= factor;
    }
    return out;
}

PriceSeries ev_price(const PriceSeries& grid_price, const StationConfig& station)
{
    station.validate();
    return grid_price.scaled(station.ev_price_multiplier);
}

Scenario::Scenario(TimeGrid grid, PriceSeries prices, LoadForecast forecast, EdrSignal edr,
                   BesSpec bes, StationConfig station)
    : grid_(grid), prices_(std::move(prices)), forecast_(std::move(forecast)), edr_(std::move(edr)),
      bes_(std::move(bes)), station_(station)
{
    check_series("grid_price", prices_.values(), grid_);
    check_series("forecast", forecast_.values(), grid_);
    check_series("edr.incentive_price", edr_.incentive_price(), grid_);
    check_series("edr.min_reduction", edr_.min_reduction(), grid_);
    if (edr_.notification_time() + edr_.decision_window() != grid_.start()) {
        throw DomainError("edr.notification: decision window does not end at the event start");
    }
    bes_.validate();
    station_.validate();
}

Scenario Scenario::with_bes(BesSpec bes) const
{
    return Scenario{grid_, prices_, forecast_, edr_, std::move(bes), station_};
}

Scenario Scenario::with_edr(EdrSignal edr) const
{
    return Scenario{grid_, prices_, forecast_, std::move(edr), bes_, station_};
}

Scenario Scenario::with_prices(PriceSeries prices) const
{
    return Scenario{grid_, std::move(prices), forecast_, edr_, bes_, station_};
}

Scenario Scenario::with_forecast(LoadForecast forecast) const
{
    return Scenario{grid_, prices_, std::move(forecast), edr_, bes_, station_};
}

}  // namespace edr

#pragma once

// File formats for the station CLI.
//
// Time series are two-column CSV files with the header `time,value`, one row
// per step start in HH:MM. Rows outside the event window are ignored, so a
// full-day file can feed any window on the same step width.
//
// A scenario is a flat `key = value` file, `#` starts a comment:
//
//   time.step_minutes          = 15
//   edr.notification           = 15:00
//   edr.decision_window_hours  = 1
//   edr.event_start            = 16:00
//   edr.event_end              = 21:00
//   edr.incentive_price_mwh    = 200      # or edr.incentive_price_csv
//   edr.min_reduction_kw       = 150      # or edr.min_reduction_csv
//   station.k_ev               = 3
//   station.forecast_csv       = forecast.csv
//   station.grid_price_csv     = grid_price.csv   # $/MWh
//   bes.rated_capacity_kwh     = 400
//   bes.max_discharge_kw       = 55
//   bes.max_charge_kw          = 50
//   bes.discharge_eff          = 1.15
//   bes.charge_eff             = 0.85
//   bes.soc_min                = 0.2
//   bes.soc_max                = 0.85
//   bes.initial_soc            = 0.85
//   bes.terminal_soc_min       = 0.5      # optional
//
// Relative CSV paths resolve against the scenario file's directory. Prices
// are read in $/MWh and stored in $/kWh.

#include "edr/domain.hpp"
#include "edr/formulation.hpp"

#include <filesystem>
#include <stdexcept>
#include <vector>

namespace edr::io {

/// Malformed or unreadable input. Messages start with `path:line:` when a
/// line is known.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Values for exactly the grid's steps, in step order.
std::vector<double> load_timeseries_csv(const std::filesystem::path& path, const TimeGrid& grid);

/// Parses a schedule as written by the `decide` command. Rows must match
/// the grid's step times in order.
Schedule load_schedule_csv(const std::filesystem::path& path, const TimeGrid& grid);

/// Reads and validates a scenario. Domain invariant failures surface as
/// DomainError naming the offending field; format problems as InputError.
Scenario load_scenario(const std::filesystem::path& config_path);

/// Writes `config_path` plus the CSV files it references into the same
/// directory. Loading the result gives back an equal Scenario.
void write_scenario(const Scenario& s, const std::filesystem::path& config_path);

}  // namespace edr::io

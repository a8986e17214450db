#pragma once

// The station's profit-maximizing dispatch over the event window as a MILP,
// and the way back from a solver result to an audited schedule.
//
// Per step t the model has eight variables, laid out contiguously:
//
//   grid_load    power drawn from the grid (>= 0, no export)
//   ev_served    EV charging power actually served, 0 <= ev_served <= forecast
//   discharge    battery discharge power
//   charge       battery charge power
//   soc          battery state of charge after step t
//   reduction    forecast minus grid_load, at least the requested minimum
//   mode_dis     1 if the battery may discharge in step t
//   mode_ch      1 if the battery may charge in step t
//
// Battery net output (discharge - charge) is substituted into the power
// balance instead of getting its own column.

#include "edr/domain.hpp"
#include "edr/milp.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace edr {

/// Column offsets within one step's block.
enum class StepVar : std::size_t {
    GridLoad = 0,
    EvServed,
    Discharge,
    Charge,
    Soc,
    Reduction,
    ModeDischarge,
    ModeCharge,
};
inline constexpr std::size_t kVarsPerStep = 8;
inline constexpr std::size_t kContinuousPerStep = 6;
inline constexpr std::size_t kBinariesPerStep = 2;

constexpr std::size_t var_index(std::size_t step, StepVar v) noexcept
{
    return step * kVarsPerStep + static_cast<std::size_t>(v);
}

/// Validation tolerances for schedules.
inline constexpr double kPowerTol = 1e-6;  // kW
inline constexpr double kSocTol = 1e-9;    // fraction
/// Values below this many kW are reported as exactly zero.
inline constexpr double kZeroClamp = 1e-9;

struct Schedule {
    std::vector<double> grid_load;
    std::vector<double> ev_served;
    std::vector<double> bes_net;
    std::vector<double> bes_discharge;
    std::vector<double> bes_charge;
    std::vector<int> mode_discharge;
    std::vector<int> mode_charge;
    std::vector<double> soc;
    std::vector<double> reduction;

    std::size_t steps() const noexcept { return grid_load.size(); }
    /// An all-zero schedule with idle battery at `soc_level`.
    static Schedule idle(std::size_t steps, double soc_level);

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

struct ProfitBreakdown {
    double ev_income = 0.0;
    double edr_income = 0.0;
    double grid_cost = 0.0;

    double total() const noexcept { return ev_income + edr_income - grid_cost; }
};

/// Which relation a violation breaks, named by what it enforces.
enum class Rule {
    ReductionDefinition,  // reduction = forecast - grid_load
    MinimumReduction,     // reduction >= requested minimum
    NoGridExport,         // grid_load >= 0
    PowerBalance,         // ev_served = grid_load + bes_net
    BatteryNet,           // bes_net = discharge - charge
    DischargeLimit,       // 0 <= discharge <= max * mode_dis
    ChargeLimit,          // 0 <= charge <= max * mode_ch
    ModeExclusive,        // mode_dis + mode_ch <= 1, modes binary
    SocDynamics,          // SOC update from dispatch
    SocBounds,            // soc_min <= soc <= soc_max
    ServedBounds,         // 0 <= ev_served <= forecast
    TerminalSoc,          // optional end-of-event floor
    Shape,                // series length mismatch
};

std::string_view rule_name(Rule rule) noexcept;

struct Violation {
    Rule rule;
    std::size_t step;
    double residual;

    std::string describe() const;
};

/// Builds the event-window MILP (maximization).
milp::MilpProblem build_edr_milp(const Scenario& s);

/// Snaps binaries, clamps dust to zero and checks the result. Throws
/// std::logic_error if the snapped schedule violates any rule, since that
/// means the solver returned a bad point.
Schedule extract_schedule(const milp::MilpOutcome& out, const Scenario& s);

/// Income and cost terms of the objective, Δt in hours.
ProfitBreakdown profit_breakdown(const Schedule& sch, const Scenario& s);

/// Independent re-check of every rule. Empty means the schedule is valid.
/// `soc_tol` widens the SOC checks; the default is kSocTol.
std::vector<Violation> validate_schedule(const Schedule& sch, const Scenario& s,
                                         double soc_tol = kSocTol);

}  // namespace edr

#pragma once

// Brute-force cross-checks for the event MILP.
//
// dp_profit runs backward induction over a lattice of SOC values. Each
// action is a battery power level (discharge, charge or idle), the next SOC
// is computed exactly, and the continuation value at an off-lattice SOC is
// linearly interpolated between the neighbouring lattice nodes. For a fixed
// battery action the stage profit is linear in grid draw, so the best grid
// draw is an endpoint of its feasible interval.
//
// zero_bes_profit is the closed form when the battery cannot act: every step
// decouples and the same endpoint rule applies with zero battery output.
//
// Neither routine touches the LP/MILP code.

#include "edr/domain.hpp"
#include "edr/formulation.hpp"

#include <optional>

namespace edr {

struct DpConfig {
    double soc_resolution = 0.005;   // fraction per lattice cell
    double power_resolution = 0.5;   // kW per action level

    void validate() const;
};

struct OracleResult {
    bool feasible = false;
    double profit = 0.0;  // $ over the event window, valid when feasible
};

/// Best stage profit rate ($/h) for a given battery net output (kW), or
/// nullopt when no grid draw satisfies the step's constraints.
std::optional<double> best_stage_rate(double bes_net_kw, double forecast_kw, double min_reduction_kw,
                                      double grid_price, double ev_price, double incentive);

/// Closed-form optimum with an idle battery.
OracleResult zero_bes_profit(const Scenario& s);

/// Approximate optimum by dynamic programming. Throws std::invalid_argument
/// for a bad config and std::runtime_error if the lattice finds no feasible
/// path although the idle battery policy is feasible.
OracleResult dp_profit(const Scenario& s, const DpConfig& cfg = {});

struct DpPolicy {
    OracleResult value;          // backward-induction value at the initial SOC
    double realized_profit = 0;  // profit of `schedule`
    Schedule schedule;           // forward rollout of the greedy policy, exact SOC
};

/// dp_profit plus a forward rollout of the policy it implies. The rollout
/// tracks SOC exactly, so the schedule is feasible for the MILP.
DpPolicy dp_policy(const Scenario& s, const DpConfig& cfg = {});

}  // namespace edr

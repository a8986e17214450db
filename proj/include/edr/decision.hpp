#pragma once

#include "edr/domain.hpp"
#include "edr/formulation.hpp"
#include "edr/milp.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace edr {

/// Margin by which event profit must beat the baseline to participate.
inline constexpr double kDecisionEpsilon = 1e-6;

enum class DecisionReason { ProfitHigher, ProfitNotHigher, Infeasible };

std::string_view reason_name(DecisionReason reason) noexcept;

struct Decision {
    bool participate = false;
    DecisionReason reason = DecisionReason::Infeasible;
    /// Optimal event-window profit; absent when the event cannot be met.
    std::optional<double> c_edr;
    double c_non_edr = 0.0;
    std::optional<ProfitBreakdown> breakdown_with_edr;
    ProfitBreakdown breakdown_without_edr;
    std::optional<Schedule> schedule;
    std::size_t nodes_explored = 0;
};

/// Baseline operation: the whole forecast is served from the grid and the
/// battery stays idle.
ProfitBreakdown profit_without_edr(const Scenario& s);

/// Solves the event MILP and compares against the baseline. Participation
/// requires c_edr > c_non_edr + kDecisionEpsilon; a tie means no.
/// Solver failures (node budget) propagate as exceptions.
Decision decide(const Scenario& s, const milp::MilpOptions& options = {});

struct SweepPoint {
    double capacity_kwh = 0.0;
    std::optional<double> c_edr;  // absent when infeasible
};

/// Re-solves with each rated capacity in turn, everything else fixed.
/// Results come back in input order. Throws std::invalid_argument for an
/// empty list or a negative capacity.
std::vector<SweepPoint> capacity_sweep(const Scenario& s, const std::vector<double>& capacities,
                                       const milp::MilpOptions& options = {});

/// Index of the first capacity after which no later entry gains more than
/// `tolerance` dollars. Absent when profit is still rising at the last entry.
std::optional<std::size_t> saturation_index(const std::vector<SweepPoint>& sweep,
                                            double tolerance = 0.01);

}  // namespace edr

#include "edr/decision.hpp"

#include "edr/simd/kernels.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

namespace edr {

std::string_view reason_name(DecisionReason reason) noexcept
{
    switch (reason) {
    case DecisionReason::ProfitHigher:
        return "profit-higher";
    case DecisionReason::ProfitNotHigher:
        return "profit-not-higher";
    case DecisionReason::Infeasible:
        return "infeasible";
    }
    return "unknown";
}

ProfitBreakdown profit_without_edr(const Scenario& s)
{
    const double dt = s.dt_hours();
    const auto forecast = s.forecast().values();
    const double energy_cost = dt * simd::dot(s.prices().values(), forecast);
    ProfitBreakdown b;
    b.ev_income = s.station().ev_price_multiplier * energy_cost;
    b.edr_income = 0.0;
    b.grid_cost = energy_cost;
    return b;
}

Decision decide(const Scenario& s, const milp::MilpOptions& options)
{
    Decision d;
    d.breakdown_without_edr = profit_without_edr(s);
    d.c_non_edr = d.breakdown_without_edr.total();

    const milp::MilpProblem problem = build_edr_milp(s);
    const milp::MilpOutcome out = milp::solve_milp(problem, options);
    d.nodes_explored = out.nodes_explored;
    if (out.status == milp::Status::Unbounded) {
        throw std::logic_error("decide: event model is unbounded");
    }
    if (out.status == milp::Status::Infeasible) {
        d.participate = false;
        d.reason = DecisionReason::Infeasible;
        return d;
    }

    d.schedule = extract_schedule(out, s);
    d.breakdown_with_edr = profit_breakdown(*d.schedule, s);
    d.c_edr = out.objective_value;
    d.participate = *d.c_edr > d.c_non_edr + kDecisionEpsilon;
    d.reason = d.participate ? DecisionReason::ProfitHigher : DecisionReason::ProfitNotHigher;
    return d;
}

std::vector<SweepPoint> capacity_sweep(const Scenario& s, const std::vector<double>& capacities,
                                       const milp::MilpOptions& options)
{
    if (capacities.empty()) {
        throw std::invalid_argument("capacity_sweep: capacity list is empty");
    }
    for (double c : capacities) {
        if (!std::isfinite(c) || c < 0.0) {
            throw std::invalid_argument("capacity_sweep: capacities must be finite and >= 0");
        }
    }

    std::vector<std::future<std::optional<double>>> pending;
    pending.reserve(capacities.size());
    for (double c : capacities) {
        BesSpec bes = s.bes();
        bes.rated_capacity_kwh = c;
        pending.push_back(std::async(std::launch::async, [scenario = s.with_bes(bes), options] {
            const milp::MilpOutcome out = milp::solve_milp(build_edr_milp(scenario), options);
            if (out.status != milp::Status::Optimal) {
                return std::optional<double>{};
            }
            extract_schedule(out, scenario);  // throws if the solution is inconsistent
            return std::optional<double>{out.objective_value};
        }));
    }

    std::vector<SweepPoint> out;
    out.reserve(capacities.size());
    for (std::size_t i = 0; i < capacities.size(); ++i) {
        out.push_back({capacities[i], pending[i].get()});
    }
    return out;
}

std::optional<std::size_t> saturation_index(const std::vector<SweepPoint>& sweep, double tolerance)
{
    if (sweep.size() < 2) {
        return std::nullopt;
    }
    for (std::size_t i = 0; i + 1 < sweep.size(); ++i) {
        if (!sweep[i].c_edr) {
            continue;
        }
        bool flat = true;
        for (std::size_t j = i + 1; j < sweep.size(); ++j) {
            if (!sweep[j].c_edr || *sweep[j].c_edr > *sweep[i].c_edr + tolerance) {
                flat = false;
                break;
            }
        }
        if (flat) {
            return i;
        }
    }
    return std::nullopt;
}

}  // namespace edr

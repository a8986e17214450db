#include "edr/formulation.hpp"

#include "edr/simd/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace edr {

using lp::Relation;
using lp::Term;

Schedule Schedule::idle(std::size_t steps, double soc_level)
{
    Schedule s;
    s.grid_load.assign(steps, 0.0);
    s.ev_served.assign(steps, 0.0);
    s.bes_net.assign(steps, 0.0);
    s.bes_discharge.assign(steps, 0.0);
    s.bes_charge.assign(steps, 0.0);
    s.mode_discharge.assign(steps, 0);
    s.mode_charge.assign(steps, 0);
    s.soc.assign(steps, soc_level);
    s.reduction.assign(steps, 0.0);
    return s;
}

std::string_view rule_name(Rule rule) noexcept
{
    switch (rule) {
    case Rule::ReductionDefinition:
        return "reduction-definition";
    case Rule::MinimumReduction:
        return "minimum-reduction";
    case Rule::NoGridExport:
        return "no-grid-export";
    case Rule::PowerBalance:
        return "power-balance";
    case Rule::BatteryNet:
        return "battery-net";
    case Rule::DischargeLimit:
        return "discharge-limit";
    case Rule::ChargeLimit:
        return "charge-limit";
    case Rule::ModeExclusive:
        return "mode-exclusive";
    case Rule::SocDynamics:
        return "soc-dynamics";
    case Rule::SocBounds:
        return "soc-bounds";
    case Rule::ServedBounds:
        return "served-bounds";
    case Rule::TerminalSoc:
        return "terminal-soc";
    case Rule::Shape:
        return "shape";
    }
    return "unknown";
}

std::string Violation::describe() const
{
    return fmt::format("{} at step {}: residual {:.3e}", rule_name(rule), step, residual);
}

milp::MilpProblem build_edr_milp(const Scenario& s)
{
    const std::size_t steps = s.steps();
    const double dt = s.dt_hours();
    const BesSpec& bes = s.bes();
    const auto grid_price = s.prices().values();
    const PriceSeries ev = ev_price(s.prices(), s.station());
    const auto incentive = s.edr().incentive_price();
    const auto min_red = s.edr().min_reduction();
    const auto forecast = s.forecast().values();
    const bool has_storage = bes.rated_capacity_kwh > 0.0;

    lp::LpProblem p{lp::Sense::Maximize};
    std::vector<std::size_t> binaries;
    binaries.reserve(steps * kBinariesPerStep);

    for (std::size_t t = 0; t < steps; ++t) {
        const double storage_cap = has_storage ? lp::kInf : 0.0;
        double soc_lower = bes.soc_min;
        if (t + 1 == steps && bes.terminal_soc_min) {
            soc_lower = std::max(soc_lower, *bes.terminal_soc_min);
        }
        p.add_variable(-grid_price[t] * dt, {0.0, lp::kInf});
        p.add_variable(ev[t] * dt, {0.0, forecast[t]});
        p.add_variable(0.0, {0.0, storage_cap});
        p.add_variable(0.0, {0.0, storage_cap});
        p.add_variable(0.0, {soc_lower, bes.soc_max});
        p.add_variable(incentive[t] * dt, {min_red[t], lp::kInf});
        binaries.push_back(p.add_variable(0.0, {0.0, 1.0}));
        binaries.push_back(p.add_variable(0.0, {0.0, 1.0}));
    }

    for (std::size_t t = 0; t < steps; ++t) {
        const auto v = [t](StepVar which) { return var_index(t, which); };

        p.add_constraint({{v(StepVar::Reduction), 1.0}, {v(StepVar::GridLoad), 1.0}},
                         Relation::Equal, forecast[t]);
        p.add_constraint({{v(StepVar::EvServed), 1.0},
                          {v(StepVar::GridLoad), -1.0},
                          {v(StepVar::Discharge), -1.0},
                          {v(StepVar::Charge), 1.0}},
                         Relation::Equal, 0.0);
        p.add_constraint({{v(StepVar::Discharge), 1.0}, {v(StepVar::ModeDischarge), -bes.max_discharge_kw}},
                         Relation::LessEqual, 0.0);
        p.add_constraint({{v(StepVar::Charge), 1.0}, {v(StepVar::ModeCharge), -bes.max_charge_kw}},
                         Relation::LessEqual, 0.0);
        p.add_constraint({{v(StepVar::ModeDischarge), 1.0}, {v(StepVar::ModeCharge), 1.0}},
                         Relation::LessEqual, 1.0);

        // SOC update, multiplied through by capacity/Δt so the row is in kW
        // and a kW-scale residual is a tiny SOC error.
        if (has_storage) {
            const double k = bes.rated_capacity_kwh / dt;
            std::vector<Term> terms{{v(StepVar::Soc), k},
                                    {v(StepVar::Discharge), bes.discharge_eff},
                                    {v(StepVar::Charge), -bes.charge_eff}};
            double rhs = 0.0;
            if (t == 0) {
                rhs = k * bes.initial_soc;
            } else {
                terms.push_back({var_index(t - 1, StepVar::Soc), -k});
            }
            p.add_constraint(std::move(terms), Relation::Equal, rhs);
        } else {
            std::vector<Term> terms{{v(StepVar::Soc), 1.0}};
            double rhs = bes.initial_soc;
            if (t > 0) {
                terms.push_back({var_index(t - 1, StepVar::Soc), -1.0});
                rhs = 0.0;
            }
            p.add_constraint(std::move(terms), Relation::Equal, rhs);
        }
    }

    // Seed: hold the grid at the requested baseline and leave the battery idle.
    std::vector<double> seed(steps * kVarsPerStep, 0.0);
    bool seed_ok = true;
    for (std::size_t t = 0; t < steps; ++t) {
        const double grid = forecast[t] - min_red[t];
        if (grid < 0.0) {
            seed_ok = false;
            break;
        }
        seed[var_index(t, StepVar::GridLoad)] = grid;
        seed[var_index(t, StepVar::EvServed)] = grid;
        seed[var_index(t, StepVar::Soc)] = bes.initial_soc;
        seed[var_index(t, StepVar::Reduction)] = min_red[t];
    }

    milp::MilpProblem problem{std::move(p), std::move(binaries)};
    if (seed_ok) {
        problem.set_warm_start(std::move(seed));
    }
    return problem;
}

Schedule extract_schedule(const milp::MilpOutcome& out, const Scenario& s)
{
    if (out.status != milp::Status::Optimal) {
        throw std::logic_error("extract_schedule: outcome is not optimal");
    }
    const std::size_t steps = s.steps();
    if (out.values.size() != steps * kVarsPerStep) {
        throw std::logic_error(fmt::format("extract_schedule: expected {} values, got {}",
                                           steps * kVarsPerStep, out.values.size()));
    }
    auto power = [&](std::size_t t, StepVar v) {
        const double x = out.values[var_index(t, v)];
        return std::abs(x) < kZeroClamp ? 0.0 : x;
    };
    auto binary = [&](std::size_t t, StepVar v) {
        const double x = out.values[var_index(t, v)];
        if (std::abs(x) <= milp::kIntegralityTol) {
            return 0;
        }
        if (std::abs(x - 1.0) <= milp::kIntegralityTol) {
            return 1;
        }
        throw std::logic_error(
            fmt::format("extract_schedule: mode variable at step {} is fractional ({})", t, x));
    };

    Schedule sch;
    for (std::size_t t = 0; t < steps; ++t) {
        sch.grid_load.push_back(power(t, StepVar::GridLoad));
        sch.ev_served.push_back(power(t, StepVar::EvServed));
        sch.bes_discharge.push_back(power(t, StepVar::Discharge));
        sch.bes_charge.push_back(power(t, StepVar::Charge));
        sch.bes_net.push_back(sch.bes_discharge.back() - sch.bes_charge.back());
        sch.mode_discharge.push_back(binary(t, StepVar::ModeDischarge));
        sch.mode_charge.push_back(binary(t, StepVar::ModeCharge));
        sch.soc.push_back(out.values[var_index(t, StepVar::Soc)]);
        sch.reduction.push_back(power(t, StepVar::Reduction));
    }

    const auto violations = validate_schedule(sch, s);
    if (!violations.empty()) {
        std::string msg = "extract_schedule: solver output breaks the model:";
        for (const Violation& v : violations) {
            msg += "\n  " + v.describe();
        }
        throw std::logic_error(msg);
    }
    return sch;
}

ProfitBreakdown profit_breakdown(const Schedule& sch, const Scenario& s)
{
    const double dt = s.dt_hours();
    const PriceSeries ev = ev_price(s.prices(), s.station());
    ProfitBreakdown b;
    b.ev_income = dt * simd::dot(ev.values(), sch.ev_served);
    b.edr_income = dt * simd::dot(s.edr().incentive_price(), sch.reduction);
    b.grid_cost = dt * simd::dot(s.prices().values(), sch.grid_load);
    return b;
}

std::vector<Violation> validate_schedule(const Schedule& sch, const Scenario& s, double soc_tol)
{
    std::vector<Violation> out;
    const std::size_t steps = s.steps();
    const std::size_t lengths[] = {sch.grid_load.size(),      sch.ev_served.size(),
                                   sch.bes_net.size(),        sch.bes_discharge.size(),
                                   sch.bes_charge.size(),     sch.mode_discharge.size(),
                                   sch.mode_charge.size(),    sch.soc.size(),
                                   sch.reduction.size()};
    for (std::size_t len : lengths) {
        if (len != steps) {
            out.push_back({Rule::Shape, 0, static_cast<double>(len) - static_cast<double>(steps)});
            return out;
        }
    }

    const BesSpec& bes = s.bes();
    const double dt = s.dt_hours();
    const auto forecast = s.forecast().values();
    const auto min_red = s.edr().min_reduction();
    const bool has_storage = bes.rated_capacity_kwh > 0.0;
    const double dis_cap = has_storage ? bes.max_discharge_kw : 0.0;
    const double ch_cap = has_storage ? bes.max_charge_kw : 0.0;

    auto flag = [&](bool bad, Rule rule, std::size_t t, double residual) {
        if (bad) {
            out.push_back({rule, t, residual});
        }
    };

    double prev_soc = bes.initial_soc;
    for (std::size_t t = 0; t < steps; ++t) {
        const double grid = sch.grid_load[t];
        const double served = sch.ev_served[t];
        const double dis = sch.bes_discharge[t];
        const double ch = sch.bes_charge[t];
        const double red = sch.reduction[t];
        const int mdis = sch.mode_discharge[t];
        const int mch = sch.mode_charge[t];

        const double r_def = red - (forecast[t] - grid);
        flag(std::abs(r_def) > kPowerTol, Rule::ReductionDefinition, t, r_def);
        flag(red < min_red[t] - kPowerTol, Rule::MinimumReduction, t, min_red[t] - red);
        flag(grid < -kPowerTol, Rule::NoGridExport, t, -grid);
        const double r_bal = served - (grid + sch.bes_net[t]);
        flag(std::abs(r_bal) > kPowerTol, Rule::PowerBalance, t, r_bal);
        const double r_net = sch.bes_net[t] - (dis - ch);
        flag(std::abs(r_net) > kPowerTol, Rule::BatteryNet, t, r_net);

        const bool modes_binary = (mdis == 0 || mdis == 1) && (mch == 0 || mch == 1);
        flag(!modes_binary || mdis + mch > 1, Rule::ModeExclusive, t,
             static_cast<double>(mdis + mch - 1));
        flag(dis < -kPowerTol, Rule::DischargeLimit, t, -dis);
        flag(dis > dis_cap * mdis + kPowerTol, Rule::DischargeLimit, t, dis - dis_cap * mdis);
        flag(ch < -kPowerTol, Rule::ChargeLimit, t, -ch);
        flag(ch > ch_cap * mch + kPowerTol, Rule::ChargeLimit, t, ch - ch_cap * mch);

        double expected_soc = prev_soc;
        if (has_storage) {
            expected_soc = prev_soc - bes.discharge_eff * dis * dt / bes.rated_capacity_kwh +
                           bes.charge_eff * ch * dt / bes.rated_capacity_kwh;
        }
        const double r_soc = sch.soc[t] - expected_soc;
        flag(std::abs(r_soc) > soc_tol, Rule::SocDynamics, t, r_soc);
        flag(sch.soc[t] < bes.soc_min - soc_tol, Rule::SocBounds, t, bes.soc_min - sch.soc[t]);
        flag(sch.soc[t] > bes.soc_max + soc_tol, Rule::SocBounds, t, sch.soc[t] - bes.soc_max);

        flag(served < -kPowerTol, Rule::ServedBounds, t, -served);
        flag(served > forecast[t] + kPowerTol, Rule::ServedBounds, t, served - forecast[t]);

        prev_soc = sch.soc[t];
    }
    if (bes.terminal_soc_min && steps > 0) {
        const double last = sch.soc.back();
        flag(last < *bes.terminal_soc_min - soc_tol, Rule::TerminalSoc, steps - 1,
             *bes.terminal_soc_min - last);
    }
    return out;
}

}  // namespace edr

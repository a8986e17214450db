#include "edr/report.hpp"

#include <fmt/format.h>

#include <cmath>

namespace edr::report {
namespace {

std::string opt_money(const std::optional<double>& v)
{
    return v ? money(*v) : std::string{"-"};
}

std::string percent_of(const Scenario& s, double capacity)
{
    const double ref = s.bes().rated_capacity_kwh;
    if (ref <= 0.0) {
        return "n/a";
    }
    return fmt::format("{:.1f}%", 100.0 * capacity / ref);
}

void append_schedule_table(std::string& out, const Scenario& s, const Schedule& sch)
{
    out += fmt::format("{:<6} {:>10} {:>10} {:>10} {:>10} {:>4} {:>4} {:>8} {:>12}\n", "time", "grid_kw",
                       "ev_kw", "dis_kw", "ch_kw", "mdis", "mch", "soc", "reduction_kw");
    for (std::size_t t = 0; t < sch.steps(); ++t) {
        out += fmt::format("{:<6} {:>10.3f} {:>10.3f} {:>10.3f} {:>10.3f} {:>4} {:>4} {:>8.4f} {:>12.3f}\n",
                           s.grid().time_at(t).to_string(), sch.grid_load[t], sch.ev_served[t],
                           sch.bes_discharge[t], sch.bes_charge[t], sch.mode_discharge[t], sch.mode_charge[t],
                           sch.soc[t], sch.reduction[t]);
    }
}

}  // namespace

std::string_view decision_label(const Decision& d) noexcept
{
    return d.participate ? "participation" : "nonparticipation";
}

std::string money(double dollars)
{
    double cents = std::round(dollars * 100.0) / 100.0;
    if (cents == 0.0) {
        cents = 0.0;  // drops the sign of -0
    }
    return fmt::format("{:.2f}", cents);
}

std::string decision_text(const Scenario& s, const Decision& d, const std::optional<OracleCheck>& oracle)
{
    const TimeGrid& g = s.grid();
    std::string out;
    out += "EDR participation decision\n";
    out += "==========================\n";
    out += fmt::format("Event window      {}-{} ({} steps of {} min)\n", g.start().to_string(),
                       g.end().to_string(), g.steps(), g.step().count());
    out += fmt::format("Notification      {} (decision window {} min)\n",
                       s.edr().notification_time().to_string(), s.edr().decision_window().count());
    out += fmt::format("Battery           {} kWh, {}/{} kW, SOC {} to {}, initial {}\n",
                       s.bes().rated_capacity_kwh, s.bes().max_discharge_kw, s.bes().max_charge_kw,
                       s.bes().soc_min, s.bes().soc_max, s.bes().initial_soc);
    out += fmt::format("Decision          {} ({})\n", decision_label(d), reason_name(d.reason));
    out += fmt::format("C_EDR ($)         {}\n", opt_money(d.c_edr));
    out += fmt::format("C_non-EDR ($)     {}\n", money(d.c_non_edr));
    out += fmt::format("B&B nodes         {}\n", d.nodes_explored);
    out += "\n";

    const ProfitBreakdown& base = d.breakdown_without_edr;
    const std::optional<ProfitBreakdown>& with = d.breakdown_with_edr;
    auto row = [&](std::string_view label, double without, std::optional<double> with_value) {
        out += fmt::format("{:<22} {:>14} {:>14}\n", label, money(without), opt_money(with_value));
    };
    out += fmt::format("{:<22} {:>14} {:>14}\n", "Index", "Without EDR", "With EDR");
    row("Station profit ($)", base.total(), with ? std::optional{with->total()} : std::nullopt);
    row("EV-load income ($)", base.ev_income, with ? std::optional{with->ev_income} : std::nullopt);
    row("EDR income ($)", base.edr_income, with ? std::optional{with->edr_income} : std::nullopt);
    row("Grid cost ($)", base.grid_cost, with ? std::optional{with->grid_cost} : std::nullopt);
    out += fmt::format("{:<22} {:>14} {:>14}\n", "Decision", "", decision_label(d));

    if (oracle) {
        out += "\n";
        out += fmt::format("DP oracle (SOC lattice {}, power step {} kW)\n", oracle->config.soc_resolution,
                           oracle->config.power_resolution);
        if (!oracle->dp.feasible) {
            out += "  no feasible policy\n";
        } else {
            out += fmt::format("  DP profit ($)   {}\n", money(oracle->dp.profit));
            if (d.c_edr) {
                const double gap = *d.c_edr - oracle->dp.profit;
                const double rel = std::abs(*d.c_edr) > 0.0 ? 100.0 * gap / std::abs(*d.c_edr) : 0.0;
                out += fmt::format("  MILP - DP ($)   {} ({:.3f}%)\n", money(gap), rel);
            }
        }
    }

    if (d.schedule) {
        out += "\nSchedule\n";
        append_schedule_table(out, s, *d.schedule);
    }
    return out;
}

std::string summary_csv(const Decision& d)
{
    const ProfitBreakdown& base = d.breakdown_without_edr;
    const auto& with = d.breakdown_with_edr;
    auto cell = [&](auto member) { return with ? money((*with).*member) : std::string{}; };

    std::string out = "index,without_edr,with_edr\n";
    out += fmt::format("station_profit,{},{}\n", money(base.total()), with ? money(with->total()) : "");
    out += fmt::format("ev_load_income,{},{}\n", money(base.ev_income), cell(&ProfitBreakdown::ev_income));
    out += fmt::format("edr_income,{},{}\n", money(base.edr_income), cell(&ProfitBreakdown::edr_income));
    out += fmt::format("grid_cost,{},{}\n", money(base.grid_cost), cell(&ProfitBreakdown::grid_cost));
    out += fmt::format("decision,,{}\n", decision_label(d));
    return out;
}

std::string schedule_csv(const Scenario& s, const Schedule& sch)
{
    std::string out =
        "time,grid_load_kw,ev_served_kw,bes_discharge_kw,bes_charge_kw,mode_dis,mode_ch,soc,reduction_kw\n";
    for (std::size_t t = 0; t < sch.steps(); ++t) {
        out += fmt::format("{},{},{},{},{},{},{},{},{}\n", s.grid().time_at(t).to_string(), sch.grid_load[t],
                           sch.ev_served[t], sch.bes_discharge[t], sch.bes_charge[t], sch.mode_discharge[t],
                           sch.mode_charge[t], sch.soc[t], sch.reduction[t]);
    }
    return out;
}

std::string sweep_text(const Scenario& s, const std::vector<SweepPoint>& sweep)
{
    const auto sat = saturation_index(sweep);
    std::string out;
    out += fmt::format("BES capacity sweep (reference {} kWh)\n", s.bes().rated_capacity_kwh);
    out += fmt::format("{:>14} {:>14} {:>14} {:>10}\n", "Capacity_kWh", "Pct_reference", "Profit_$", "Saturated");
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        out += fmt::format("{:>14} {:>14} {:>14} {:>10}\n", sweep[i].capacity_kwh,
                           percent_of(s, sweep[i].capacity_kwh), opt_money(sweep[i].c_edr),
                           sat && *sat == i ? "*" : "");
    }
    if (sat) {
        out += fmt::format("Saturation at {} kWh ({}): later capacities add at most $0.01\n",
                           sweep[*sat].capacity_kwh, percent_of(s, sweep[*sat].capacity_kwh));
    } else {
        out += "No saturation within the listed capacities\n";
    }
    return out;
}

std::string sweep_csv(const Scenario& s, const std::vector<SweepPoint>& sweep)
{
    const auto sat = saturation_index(sweep);
    std::string out = "capacity_kwh,pct_reference,profit,saturated\n";
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        const double ref = s.bes().rated_capacity_kwh;
        const std::string pct = ref > 0.0 ? fmt::format("{:.1f}", 100.0 * sweep[i].capacity_kwh / ref) : "";
        out += fmt::format("{},{},{},{}\n", sweep[i].capacity_kwh, pct,
                           sweep[i].c_edr ? money(*sweep[i].c_edr) : "", sat && *sat == i ? 1 : 0);
    }
    return out;
}

}  // namespace edr::report

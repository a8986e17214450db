#include "edr/dp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

namespace edr {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kSocSlack = 1e-12;

struct StageChoice {
    double grid;
    double rate;  // $/h
};

std::optional<StageChoice> stage_choice(double net, double forecast, double min_reduction,
                                        double grid_price, double ev_price, double incentive)
{
    const double lower = std::max(0.0, -net);
    double upper = std::min(forecast - min_reduction, forecast - net);
    if (lower > upper + 1e-12) {
        return std::nullopt;
    }
    upper = std::max(upper, lower);
    const double coeff = ev_price - grid_price - incentive;
    const double grid = coeff > 0.0 ? upper : lower;
    const double rate = ev_price * (grid + net) + incentive * (forecast - grid) - grid_price * grid;
    return StageChoice{grid, rate};
}

class SocLattice {
public:
    SocLattice(double lo, double hi, double resolution) : lo_(lo), hi_(hi), res_(resolution)
    {
        nodes_.push_back(lo);
        for (std::size_t k = 1;; ++k) {
            const double v = lo + static_cast<double>(k) * resolution;
            if (v >= hi - 1e-12) {
                break;
            }
            nodes_.push_back(v);
        }
        if (hi > lo) {
            nodes_.push_back(hi);
        }
    }

    std::size_t size() const noexcept { return nodes_.size(); }
    double operator[](std::size_t k) const { return nodes_[k]; }

    bool contains(double s) const noexcept { return s >= lo_ - kSocSlack && s <= hi_ + kSocSlack; }
    double clamp(double s) const noexcept { return std::clamp(s, lo_, hi_); }

    double interpolate(const std::vector<double>& values, double s) const
    {
        if (!contains(s)) {
            return kNegInf;
        }
        s = clamp(s);
        const std::size_t n = nodes_.size();
        auto k = static_cast<std::size_t>(std::floor((s - lo_) / res_));
        k = std::min(k, n - 1);
        while (k + 1 < n && nodes_[k + 1] <= s) {
            ++k;
        }
        while (k > 0 && nodes_[k] > s) {
            --k;
        }
        if (s == nodes_[k] || k + 1 == n) {
            return values[k];
        }
        const double a = values[k];
        const double b = values[k + 1];
        if (a == kNegInf || b == kNegInf) {
            return kNegInf;
        }
        const double w = (s - nodes_[k]) / (nodes_[k + 1] - nodes_[k]);
        return a + w * (b - a);
    }

private:
    double lo_;
    double hi_;
    double res_;
    std::vector<double> nodes_;
};

struct Action {
    double discharge;
    double charge;
};

class DpSolver {
public:
    DpSolver(const Scenario& s, const DpConfig& cfg)
        : s_(s), bes_(s.bes()), dt_(s.dt_hours()), ev_(ev_price(s.prices(), s.station())),
          lattice_(bes_.soc_min, bes_.soc_max, cfg.soc_resolution),
          storage_(bes_.rated_capacity_kwh > 0.0)
    {
        base_actions_.push_back({0.0, 0.0});
        if (storage_) {
            add_levels(bes_.max_discharge_kw, cfg.power_resolution, true);
            add_levels(bes_.max_charge_kw, cfg.power_resolution, false);
        }
    }

    void backward()
    {
        const std::size_t steps = s_.steps();
        values_.assign(steps + 1, std::vector<double>(lattice_.size(), 0.0));
        for (std::size_t k = 0; k < lattice_.size(); ++k) {
            const bool ok = !bes_.terminal_soc_min || lattice_[k] >= *bes_.terminal_soc_min - kSocSlack;
            values_[steps][k] = ok ? 0.0 : kNegInf;
        }
        for (std::size_t t = steps; t-- > 1;) {
            for (std::size_t k = 0; k < lattice_.size(); ++k) {
                values_[t][k] = best(t, lattice_[k]).value;
            }
        }
    }

    OracleResult value_at_start() const
    {
        const double v = best(0, bes_.initial_soc).value;
        if (v == kNegInf) {
            return {false, 0.0};
        }
        return {true, v};
    }

    DpPolicy rollout() const
    {
        DpPolicy policy;
        policy.value = value_at_start();
        const std::size_t steps = s_.steps();
        if (!policy.value.feasible) {
            return policy;
        }
        Schedule& sch = policy.schedule;
        double soc = bes_.initial_soc;
        double realized = 0.0;
        for (std::size_t t = 0; t < steps; ++t) {
            const Choice c = best(t, soc);
            if (c.value == kNegInf) {
                throw std::logic_error("dp_policy: rollout reached a dead end");
            }
            const double net = c.action.discharge - c.action.charge;
            const double fore = s_.forecast()[t];
            sch.grid_load.push_back(c.grid);
            sch.ev_served.push_back(c.grid + net);
            sch.bes_net.push_back(net);
            sch.bes_discharge.push_back(c.action.discharge);
            sch.bes_charge.push_back(c.action.charge);
            sch.mode_discharge.push_back(c.action.discharge > 0.0 ? 1 : 0);
            sch.mode_charge.push_back(c.action.charge > 0.0 ? 1 : 0);
            sch.soc.push_back(c.next_soc);
            sch.reduction.push_back(fore - c.grid);
            realized += c.stage_rate * dt_;
            soc = c.next_soc;
        }
        policy.realized_profit = realized;
        return policy;
    }

private:
    struct Choice {
        double value = kNegInf;
        Action action{0.0, 0.0};
        double grid = 0.0;
        double stage_rate = 0.0;
        double next_soc = 0.0;
    };

    void add_levels(double max_kw, double resolution, bool discharge)
    {
        if (max_kw <= 0.0) {
            return;
        }
        for (std::size_t k = 1;; ++k) {
            const double p = static_cast<double>(k) * resolution;
            if (p >= max_kw) {
                break;
            }
            base_actions_.push_back(discharge ? Action{p, 0.0} : Action{0.0, p});
        }
        base_actions_.push_back(discharge ? Action{max_kw, 0.0} : Action{0.0, max_kw});
    }

    double next_soc(double soc, const Action& a) const
    {
        if (!storage_) {
            return soc;
        }
        return soc - bes_.discharge_eff * a.discharge * dt_ / bes_.rated_capacity_kwh +
               bes_.charge_eff * a.charge * dt_ / bes_.rated_capacity_kwh;
    }

    void consider(std::size_t t, double soc, const Action& a, Choice& out) const
    {
        const double s_next = next_soc(soc, a);
        if (!lattice_.contains(s_next)) {
            return;
        }
        const double net = a.discharge - a.charge;
        const auto stage = stage_choice(net, s_.forecast()[t], s_.edr().min_reduction()[t],
                                        s_.prices()[t], ev_[t], s_.edr().incentive_price()[t]);
        if (!stage) {
            return;
        }
        const double clamped = lattice_.clamp(s_next);
        const double future = lattice_.interpolate(values_[t + 1], clamped);
        if (future == kNegInf) {
            return;
        }
        const double v = stage->rate * dt_ + future;
        if (v > out.value) {
            out = Choice{v, a, stage->grid, stage->rate, clamped};
        }
    }

    Choice best(std::size_t t, double soc) const
    {
        Choice out;
        for (const Action& a : base_actions_) {
            consider(t, soc, a, out);
        }
        if (storage_) {
            // Actions that land exactly on an SOC bound.
            const double to_min = (soc - bes_.soc_min) * bes_.rated_capacity_kwh / (bes_.discharge_eff * dt_);
            if (to_min > 0.0 && to_min <= bes_.max_discharge_kw) {
                consider(t, soc, Action{to_min, 0.0}, out);
            }
            const double to_max = (bes_.soc_max - soc) * bes_.rated_capacity_kwh / (bes_.charge_eff * dt_);
            if (to_max > 0.0 && to_max <= bes_.max_charge_kw) {
                consider(t, soc, Action{0.0, to_max}, out);
            }
        }
        return out;
    }

    const Scenario& s_;
    const BesSpec& bes_;
    double dt_;
    PriceSeries ev_;
    SocLattice lattice_;
    bool storage_;
    std::vector<Action> base_actions_;
    std::vector<std::vector<double>> values_;
};

void check_lattice_outcome(const Scenario& s, const OracleResult& dp)
{
    if (dp.feasible) {
        return;
    }
    const bool idle_meets_terminal =
        !s.bes().terminal_soc_min || s.bes().initial_soc >= *s.bes().terminal_soc_min;
    if (idle_meets_terminal && zero_bes_profit(s).feasible) {
        throw std::runtime_error(
            "dp_profit: no feasible path on the SOC lattice although the idle battery is feasible; "
            "refine the lattice");
    }
}

}  // namespace

void DpConfig::validate() const
{
    if (!std::isfinite(soc_resolution) || soc_resolution <= 0.0) {
        throw std::invalid_argument(fmt::format("dp: soc_resolution {} must be > 0", soc_resolution));
    }
    if (!std::isfinite(power_resolution) || power_resolution <= 0.0) {
        throw std::invalid_argument(
            fmt::format("dp: power_resolution {} must be > 0", power_resolution));
    }
}

std::optional<double> best_stage_rate(double bes_net_kw, double forecast_kw, double min_reduction_kw,
                                      double grid_price, double ev_price, double incentive)
{
    const auto c = stage_choice(bes_net_kw, forecast_kw, min_reduction_kw, grid_price, ev_price, incentive);
    if (!c) {
        return std::nullopt;
    }
    return c->rate;
}

OracleResult zero_bes_profit(const Scenario& s)
{
    const PriceSeries ev = ev_price(s.prices(), s.station());
    const double dt = s.dt_hours();
    double total = 0.0;
    // Summed last step first, matching the order backward induction adds stages.
    for (std::size_t t = s.steps(); t-- > 0;) {
        const auto rate = best_stage_rate(0.0, s.forecast()[t], s.edr().min_reduction()[t],
                                          s.prices()[t], ev[t], s.edr().incentive_price()[t]);
        if (!rate) {
            return {false, 0.0};
        }
        total = *rate * dt + total;
    }
    return {true, total};
}

OracleResult dp_profit(const Scenario& s, const DpConfig& cfg)
{
    cfg.validate();
    DpSolver solver{s, cfg};
    solver.backward();
    const OracleResult r = solver.value_at_start();
    check_lattice_outcome(s, r);
    return r;
}

DpPolicy dp_policy(const Scenario& s, const DpConfig& cfg)
{
    cfg.validate();
    DpSolver solver{s, cfg};
    solver.backward();
    DpPolicy p = solver.rollout();
    check_lattice_outcome(s, p.value);
    return p;
}

}  // namespace edr

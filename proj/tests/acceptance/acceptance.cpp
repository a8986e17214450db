// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include "edr/decision.hpp"
#include "edr/dp_oracle.hpp"
#include "edr/io.hpp"
#include "edr/report.hpp"

#include "../test_support.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>

using namespace edr;
namespace t = edr::fixtures;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

// Every optimal schedule seen by any criterion is audited for criterion 6.
struct Audit {
    std::size_t schedules = 0;
    std::size_t violations = 0;
    std::size_t both_modes = 0;
    std::string first_problem;

    void check(const Schedule& sch, const Scenario& s, const std::string& where)
    {
        ++schedules;
        const auto v = validate_schedule(sch, s);
        violations += v.size();
        if (!v.empty() && first_problem.empty()) {
            first_problem = where + ": " + v.front().describe();
        }
        for (std::size_t k = 0; k < sch.steps(); ++k) {
            if (sch.mode_discharge[k] == 1 && sch.mode_charge[k] == 1) {
                ++both_modes;
                if (first_problem.empty()) {
                    first_problem = fmt::format("{}: both modes at step {}", where, k);
                }
            }
        }
    }
};

Audit g_audit;

Decision audited_decide(const Scenario& s, const std::string& where)
{
    Decision d = decide(s);
    if (d.schedule) {
        g_audit.check(*d.schedule, s, where);
    }
    return d;
}

Scenario load_case(const char* name)
{
    return io::load_scenario(t::data_dir() / name / "scenario.cfg");
}

Scenario with_incentive(const Scenario& s, std::vector<double> per_kwh)
{
    return s.with_edr(EdrSignal(s.grid(), std::move(per_kwh),
                                {s.edr().min_reduction().begin(), s.edr().min_reduction().end()},
                                s.edr().notification_time(), s.edr().decision_window()));
}

Scenario with_min_reduction(const Scenario& s, std::vector<double> kw)
{
    return s.with_edr(EdrSignal(s.grid(), {s.edr().incentive_price().begin(), s.edr().incentive_price().end()},
                                std::move(kw), s.edr().notification_time(), s.edr().decision_window()));
}

Scenario scale_prices(const Scenario& s, double lambda)
{
    std::vector<double> inc(s.edr().incentive_price().begin(), s.edr().incentive_price().end());
    for (double& v : inc) {
        v *= lambda;
    }
    return with_incentive(s.with_prices(s.prices().scaled(lambda)), inc);
}

Verdict c1_baseline_ratio()
{
    std::mt19937_64 rng(101);
    double worst = 0.0;
    std::vector<Scenario> all{load_case("case1"), load_case("case2")};
    for (int i = 0; i < 200; ++i) {
        auto series = t::random_series(rng, 1 + i % 24);
        series.k_ev = 3.0;
        all.push_back(t::make_scenario(series, t::reference_bes()));
    }
    for (const Scenario& s : all) {
        const ProfitBreakdown b = profit_without_edr(s);
        if (b.grid_cost > 0.0) {
            worst = std::max(worst, std::abs(b.ev_income / b.grid_cost - 3.0) / 3.0);
        }
    }
    return {worst <= 1e-3, fmt::format("{} scenarios, worst relative deviation of income/cost from 3: {:.3g}",
                                       all.size(), worst)};
}

Verdict c2_pinned_minimum()
{
    const Scenario s = load_case("case1");
    const Decision d = audited_decide(s, "case1");
    if (!d.breakdown_with_edr || !d.schedule) {
        return {false, "case 1 solve returned no schedule"};
    }
    double max_slack = 0.0;
    for (std::size_t k = 0; k < s.steps(); ++k) {
        max_slack = std::max(max_slack, std::abs(d.schedule->reduction[k] - s.edr().min_reduction()[k]));
    }
    const double income = d.breakdown_with_edr->edr_income;
    return {std::abs(income - 56.25) <= 1e-3 && max_slack <= 1e-6,
            fmt::format("EDR income ${:.6f} (target $56.25), max |reduction - minimum| {:.3g} kW", income, max_slack)};
}

Verdict c3_decisions()
{
    const Scenario c1 = load_case("case1");
    const Scenario c2 = load_case("case2");
    // Check each fixture has the price structure its case calls for.
    bool c1_shape = true;
    bool c2_shape = true;
    const double k = c1.station().ev_price_multiplier;
    for (std::size_t i = 0; i < c1.steps(); ++i) {
        c1_shape = c1_shape && (k - 1.0) * c1.prices()[i] > c1.edr().incentive_price()[i];
        c1_shape = c1_shape && (i == 0 || c1.forecast()[i] > c1.forecast()[i - 1]);
    }
    for (std::size_t i = 0; i < c2.steps(); ++i) {
        c2_shape = c2_shape &&
                   c2.edr().incentive_price()[i] >= (c2.station().ev_price_multiplier - 1.0) * c2.prices()[i];
        c2_shape = c2_shape && (i == 0 || c2.forecast()[i] < c2.forecast()[i - 1]);
    }
    const Decision d1 = audited_decide(c1, "case1");
    const Decision d2 = audited_decide(c2, "case2");
    return {c1_shape && c2_shape && !d1.participate && d2.participate,
            fmt::format("case 1 {} (C_EDR {} vs {}), case 2 {} (C_EDR {} vs {}), fixture shapes {}",
                        report::decision_label(d1), report::money(d1.c_edr.value_or(NAN)), report::money(d1.c_non_edr),
                        report::decision_label(d2), report::money(d2.c_edr.value_or(NAN)), report::money(d2.c_non_edr),
                        c1_shape && c2_shape ? "ok" : "WRONG")};
}

Verdict c4_oracle_equivalence()
{
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> factor(0.1, 0.25);
    std::uniform_real_distribution<double> soc(0.2, 0.85);
    std::uniform_int_distribution<int> horizon(3, 6);
    int failures = 0;
    double worst_rel = 0.0;
    double worst_abs = 0.0;
    std::string first;
    for (int i = 0; i < 50; ++i) {
        const Scenario s = t::make_scenario(t::random_series(rng, static_cast<std::size_t>(horizon(rng))),
                                            t::scaled_bes(factor(rng), soc(rng)));
        const Decision d = audited_decide(s, fmt::format("oracle instance {}", i));
        const OracleResult dp = dp_profit(s, DpConfig{0.005, 0.5});
        if (!d.c_edr || !dp.feasible) {
            ++failures;
            continue;
        }
        const double gap = std::abs(*d.c_edr - dp.profit);
        const double allowed = std::max(0.005 * std::abs(*d.c_edr), 0.01);
        worst_abs = std::max(worst_abs, gap);
        worst_rel = std::max(worst_rel, gap / std::max(std::abs(*d.c_edr), 1e-12));
        if (gap > allowed) {
            ++failures;
            if (first.empty()) {
                first = fmt::format("; first miss #{}: MILP {} DP {}", i, *d.c_edr, dp.profit);
            }
        }
    }
    return {failures == 0, fmt::format("50 instances, {} outside tolerance, worst gap ${:.4f} ({:.4f}%){}", failures,
                                       worst_abs, 100.0 * worst_rel, first)};
}

Verdict c5_zero_bes()
{
    std::mt19937_64 rng(303);
    double worst = 0.0;
    int infeasible_mismatch = 0;
    for (int i = 0; i < 200; ++i) {
        const Scenario s = t::make_scenario(t::random_series(rng, 1 + i % 20), t::no_bes());
        const Decision d = audited_decide(s, fmt::format("zero-BES instance {}", i));
        const OracleResult closed = zero_bes_profit(s);
        if (!d.c_edr || !closed.feasible) {
            ++infeasible_mismatch;
            continue;
        }
        worst = std::max(worst, std::abs(*d.c_edr - closed.profit));
    }
    return {worst <= 1e-6 && infeasible_mismatch == 0,
            fmt::format("200 instances, worst |MILP - closed form| ${:.3g}, feasibility mismatches {}", worst,
                        infeasible_mismatch)};
}

std::vector<double> table_capacities()
{
    return {0, 80, 160, 240, 320, 400, 480, 560, 600, 800};
}

Verdict c7_capacity_sweep()
{
    const Scenario s = load_case("case2");
    const auto caps = table_capacities();
    const auto sweep = capacity_sweep(s, caps);
    bool monotone = true;
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        if (!sweep[i].c_edr) {
            return {false, fmt::format("capacity {} infeasible", caps[i])};
        }
        if (i > 0 && *sweep[i].c_edr < *sweep[i - 1].c_edr - 1e-6) {
            monotone = false;
        }
    }
    const auto sat = saturation_index(sweep);
    std::string profits;
    for (const auto& p : sweep) {
        profits += fmt::format(" {}", report::money(*p.c_edr));
    }
    return {monotone && sat.has_value(),
            fmt::format("profits{}; saturation at {}", profits,
                        sat ? fmt::format("{} kWh ({:.0f}% of rated)", caps[*sat],
                                          100.0 * caps[*sat] / s.bes().rated_capacity_kwh)
                            : std::string{"none"})};
}

// Schedules for the sweep capacities, for the audit.
void audit_sweep_schedules()
{
    const Scenario s = load_case("case2");
    for (double c : table_capacities()) {
        BesSpec bes = s.bes();
        bes.rated_capacity_kwh = c;
        audited_decide(s.with_bes(bes), fmt::format("case2 capacity {}", c));
    }
}

Verdict c8_monotonicity()
{
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> factor(0.2, 1.0);
    std::uniform_real_distribution<double> soc(0.2, 0.85);
    std::uniform_real_distribution<double> bump(0.0, 60.0);
    int inc_bad = 0;
    int cap_bad = 0;
    int req_bad = 0;
    for (int i = 0; i < 20; ++i) {
        const Scenario s = t::make_scenario(t::random_series(rng, 4 + i % 8), t::scaled_bes(factor(rng), soc(rng)));
        const double base = *audited_decide(s, "monotonicity base").c_edr;

        std::vector<double> inc(s.edr().incentive_price().begin(), s.edr().incentive_price().end());
        for (double& v : inc) {
            v += price_per_kwh(bump(rng));
        }
        if (*audited_decide(with_incentive(s, inc), "incentive raised").c_edr < base - 1e-6) {
            ++inc_bad;
        }

        BesSpec bigger = s.bes();
        bigger.rated_capacity_kwh *= 1.0 + factor(rng);
        if (*audited_decide(s.with_bes(bigger), "capacity raised").c_edr < base - 1e-6) {
            ++cap_bad;
        }

        std::vector<double> req(s.edr().min_reduction().begin(), s.edr().min_reduction().end());
        for (std::size_t k = 0; k < req.size(); ++k) {
            req[k] = std::min(s.forecast()[k], req[k] + bump(rng));
        }
        const Decision stricter = audited_decide(with_min_reduction(s, req), "requirement raised");
        if (stricter.c_edr && *stricter.c_edr > base + 1e-6) {
            ++req_bad;
        }
    }
    return {inc_bad == 0 && cap_bad == 0 && req_bad == 0,
            fmt::format("20 trials each; violations: incentive {}, capacity {}, requirement {}", inc_bad, cap_bad,
                        req_bad)};
}

Verdict c9_scaling()
{
    std::mt19937_64 rng(505);
    std::vector<Scenario> base{load_case("case1"), load_case("case2")};
    for (int i = 0; i < 8; ++i) {
        base.push_back(t::make_scenario(t::random_series(rng, 4 + i), t::reference_bes()));
    }
    double worst = 0.0;
    int flips = 0;
    for (const Scenario& s : base) {
        const Decision d = audited_decide(s, "scaling base");
        for (double lambda : {0.5, 2.0, 10.0}) {
            const Decision e = audited_decide(scale_prices(s, lambda), "scaled prices");
            worst = std::max(worst, std::abs(e.c_non_edr - lambda * d.c_non_edr) / std::abs(lambda * d.c_non_edr));
            if (d.c_edr && e.c_edr) {
                worst = std::max(worst, std::abs(*e.c_edr - lambda * *d.c_edr) / std::abs(lambda * *d.c_edr));
            }
            if (e.participate != d.participate) {
                ++flips;
            }
        }
    }
    return {worst <= 1e-6 && flips == 0,
            fmt::format("{} scenarios x 3 factors, worst relative error {:.3g}, decision flips {}", base.size(), worst,
                        flips)};
}

Verdict c10_performance()
{
    const Scenario s = load_case("case2");
    const std::size_t binaries = build_edr_milp(s).binary_vars().size();
    double slowest = 0.0;
    std::string first_text;
    bool identical = true;
    for (int run = 0; run < 3; ++run) {
        const auto start = std::chrono::steady_clock::now();
        const Decision d = decide(s);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        slowest = std::max(slowest, secs);
        const std::string text = report::decision_text(s, d) + report::summary_csv(d) +
                                 (d.schedule ? report::schedule_csv(s, *d.schedule) : "");
        if (run == 0) {
            first_text = text;
        } else if (text != first_text) {
            identical = false;
        }
    }
    return {s.steps() == 20 && binaries == 40 && slowest < 1.0 && identical,
            fmt::format("{} steps, {} binaries, slowest decide {:.3f} s, reports byte-identical: {}", s.steps(),
                        binaries, slowest, identical ? "yes" : "no")};
}

}  // namespace

int main()
{
    struct Criterion {
        const char* id;
        const char* name;
        double budget_s;
        std::function<Verdict()> run;
    };
    const std::vector<Criterion> criteria{
        {"1", "baseline income/cost ratio equals K_EV", 1.0, c1_baseline_ratio},
        {"2", "pinned-minimum EDR income on case 1", 1.0, c2_pinned_minimum},
        {"3", "case decisions (1 declines, 2 participates)", 2.0, c3_decisions},
        {"4", "MILP matches DP oracle on 50 random instances", 60.0, c4_oracle_equivalence},
        {"5", "MILP matches zero-battery closed form on 200 instances", 30.0, c5_zero_bes},
        {"7", "capacity sweep is monotone and saturates", 20.0, c7_capacity_sweep},
        {"8", "monotone in incentive, capacity and requirement", 60.0, c8_monotonicity},
        {"9", "price scaling invariance", 10.0, c9_scaling},
        {"10", "20-step decide under 1 s, deterministic reports", 5.0, c10_performance},
    };

    int failed = 0;
    auto report_line = [&](const char* id, const char* name, const Verdict& v, double secs, double budget) {
        const bool ok = v.pass && secs <= budget;
        failed += ok ? 0 : 1;
        fmt::print("[{}] criterion {:>2}: {} | {} | {:.2f} s (budget {:.0f} s)\n", ok ? "PASS" : "FAIL", id, name,
                   v.detail, secs, budget);
    };

    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, fmt::format("exception: {}", e.what())};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report_line(c.id, c.name, v, secs, c.budget_s);
    }

    // Criterion 6 audits every schedule produced above plus the sweep points.
    const auto start = std::chrono::steady_clock::now();
    try {
        audit_sweep_schedules();
    } catch (const std::exception& e) {
        g_audit.first_problem = e.what();
        ++g_audit.violations;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report_line("6", "every optimal schedule passes the validator",
                {g_audit.violations == 0 && g_audit.both_modes == 0 && g_audit.schedules > 0,
                 fmt::format("{} schedules, {} violations, {} steps with both modes{}", g_audit.schedules,
                             g_audit.violations, g_audit.both_modes,
                             g_audit.first_problem.empty() ? "" : "; " + g_audit.first_problem)},
                secs, 20.0);

    fmt::print("{} of 10 criteria passed\n", 10 - failed);
    return failed == 0 ? 0 : 1;
}

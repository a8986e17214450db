// edr-station: decide whether to join an emergency demand response event,
// sweep battery capacities, or check a schedule file against a scenario.
//
// Exit status for `decide`: 0 participate, 1 do not participate, 2 the event
// cannot be met. `validate` returns 0 for a clean schedule and 1 otherwise.
// 3 means bad input, 4 any other failure.

#include "edr/decision.hpp"
#include "edr/dp_oracle.hpp"
#include "edr/io.hpp"
#include "edr/report.hpp"
#include "edr/simd/kernels.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;

namespace {

constexpr int kExitInputError = 3;
constexpr int kExitFailure = 4;

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw edr::io::InputError(fmt::format("{}: cannot write file", path.string()));
    }
    out << text;
    if (!out) {
        throw edr::io::InputError(fmt::format("{}: write failed", path.string()));
    }
}

std::string utc_now()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Provenance lives here so the report bodies stay reproducible.
void write_metadata(const fs::path& out_dir, const std::string& command, const fs::path& scenario,
                    nlohmann::json extra)
{
    nlohmann::json meta = {
        {"tool", "edr-station"},
        {"command", command},
        {"scenario", fs::absolute(scenario).string()},
        {"generated_utc", utc_now()},
        {"simd", std::string{edr::simd::isa_name(edr::simd::active_kernels().isa)}},
    };
    meta.update(extra);
    write_file(out_dir / "metadata.json", meta.dump(2) + "\n");
}

void prepare_out_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw edr::io::InputError(fmt::format("{}: cannot create output directory", dir.string()));
    }
}

struct DecideArgs {
    std::string scenario;
    std::string out;
    std::string format = "both";
    bool oracle = false;
};

int run_decide(const DecideArgs& a)
{
    const edr::Scenario s = edr::io::load_scenario(a.scenario);
    const edr::Decision d = edr::decide(s);

    std::optional<edr::report::OracleCheck> oracle;
    if (a.oracle) {
        edr::report::OracleCheck check;
        check.dp = edr::dp_profit(s, check.config);
        oracle = check;
    }

    prepare_out_dir(a.out);
    const fs::path out{a.out};
    if (a.format == "text" || a.format == "both") {
        write_file(out / "report.txt", edr::report::decision_text(s, d, oracle));
    }
    if (a.format == "csv" || a.format == "both") {
        write_file(out / "summary.csv", edr::report::summary_csv(d));
        if (d.schedule) {
            write_file(out / "schedule.csv", edr::report::schedule_csv(s, *d.schedule));
        }
    }
    write_metadata(out, "decide", a.scenario, {{"participate", d.participate},
                                                {"reason", std::string{edr::reason_name(d.reason)}}});

    fmt::print("{} ({}): C_EDR {} vs C_non-EDR {}\n", edr::report::decision_label(d), edr::reason_name(d.reason),
               d.c_edr ? edr::report::money(*d.c_edr) : "-", edr::report::money(d.c_non_edr));
    switch (d.reason) {
    case edr::DecisionReason::ProfitHigher:
        return 0;
    case edr::DecisionReason::ProfitNotHigher:
        return 1;
    case edr::DecisionReason::Infeasible:
        return 2;
    }
    return kExitFailure;
}

struct SweepArgs {
    std::string scenario;
    std::vector<double> capacities;
    std::string out;
};

int run_sweep(const SweepArgs& a)
{
    const edr::Scenario s = edr::io::load_scenario(a.scenario);
    const auto sweep = edr::capacity_sweep(s, a.capacities);
    prepare_out_dir(a.out);
    const fs::path out{a.out};
    const std::string text = edr::report::sweep_text(s, sweep);
    write_file(out / "sweep.txt", text);
    write_file(out / "sweep.csv", edr::report::sweep_csv(s, sweep));
    write_metadata(out, "sweep", a.scenario, {{"capacities_kwh", a.capacities}});
    fmt::print("{}", text);
    return 0;
}

struct ValidateArgs {
    std::string scenario;
    std::string schedule;
};

int run_validate(const ValidateArgs& a)
{
    const edr::Scenario s = edr::io::load_scenario(a.scenario);
    const edr::Schedule sch = edr::io::load_schedule_csv(a.schedule, s.grid());
    const auto violations = edr::validate_schedule(sch, s);
    for (const auto& v : violations) {
        fmt::print("{}\n", v.describe());
    }
    fmt::print("{} violation(s)\n", violations.size());
    return violations.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"EDR participation decisions for a battery-assisted EV charging station", "edr-station"};
    app.require_subcommand(1);

    DecideArgs decide_args;
    auto* decide = app.add_subcommand("decide", "Solve the event schedule and decide whether to participate");
    decide->add_option("--scenario", decide_args.scenario, "Scenario config file")->required()->check(CLI::ExistingFile);
    decide->add_option("--out", decide_args.out, "Output directory")->required();
    decide->add_option("--format", decide_args.format, "Report files to write")
        ->check(CLI::IsMember({"text", "csv", "both"}));
    decide->add_flag("--oracle", decide_args.oracle, "Cross-check the optimum with dynamic programming");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Re-solve over a list of battery capacities");
    sweep->add_option("--scenario", sweep_args.scenario, "Scenario config file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--capacities", sweep_args.capacities, "Comma-separated capacities in kWh")
        ->required()
        ->delimiter(',');
    sweep->add_option("--out", sweep_args.out, "Output directory")->required();

    ValidateArgs validate_args;
    auto* validate = app.add_subcommand("validate", "Check a schedule CSV against a scenario");
    validate->add_option("--scenario", validate_args.scenario, "Scenario config file")
        ->required()
        ->check(CLI::ExistingFile);
    validate->add_option("--schedule", validate_args.schedule, "Schedule CSV")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInputError;
    }

    try {
        if (*decide) {
            return run_decide(decide_args);
        }
        if (*sweep) {
            return run_sweep(sweep_args);
        }
        return run_validate(validate_args);
    } catch (const edr::io::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const edr::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

#pragma once

// Plain-text and CSV renderings of decisions and sweeps. Output depends only
// on the inputs: no clocks, hostnames or paths, so reruns are byte-identical.
// Money is shown to cents; schedule CSVs carry full precision so they can be
// re-validated.

#include "edr/decision.hpp"
#include "edr/dp_oracle.hpp"

#include <optional>
#include <string>
#include <vector>

namespace edr::report {

struct OracleCheck {
    DpConfig config;
    OracleResult dp;
};

/// "participation" or "nonparticipation".
std::string_view decision_label(const Decision& d) noexcept;

/// Cents with two decimals, never "-0.00".
std::string money(double dollars);

std::string decision_text(const Scenario& s, const Decision& d, const std::optional<OracleCheck>& oracle = {});

/// Columns index,without_edr,with_edr; one row per breakdown line.
std::string summary_csv(const Decision& d);

/// Columns time,grid_load_kw,ev_served_kw,bes_discharge_kw,bes_charge_kw,
/// mode_dis,mode_ch,soc,reduction_kw.
std::string schedule_csv(const Scenario& s, const Schedule& sch);

/// Percent column uses the scenario's rated capacity as 100%.
std::string sweep_text(const Scenario& s, const std::vector<SweepPoint>& sweep);
std::string sweep_csv(const Scenario& s, const std::vector<SweepPoint>& sweep);

}  // namespace edr::report

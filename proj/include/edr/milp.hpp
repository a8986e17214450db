#pragma once

// Exact 0/1 mixed-integer solver on top of the simplex in lp.hpp.
//
// Search order is deterministic: best bound first, deeper node on equal
// bounds, then creation order. Branching picks the most fractional binary,
// lowest index on ties.

#include "edr/lp.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace edr::milp {

inline constexpr std::size_t kMaxBinaries = 64;
inline constexpr double kIntegralityTol = 1e-6;
inline constexpr double kAbsoluteGap = 1e-6;
inline constexpr std::size_t kDefaultNodeBudget = 1'000'000;

/// The search ran out of nodes before proving optimality.
class NodeBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MilpProblem {
public:
    /// Throws std::invalid_argument if a binary index is out of range, its
    /// bounds in `base` are not [0, 1], or there are more than kMaxBinaries.
    MilpProblem(lp::LpProblem base, std::vector<std::size_t> binary_vars);

    const lp::LpProblem& base() const noexcept { return base_; }
    const std::vector<std::size_t>& binary_vars() const noexcept { return binaries_; }

    /// Optional starting point. If it is feasible and integral it seeds the
    /// incumbent before the root relaxation is solved.
    void set_warm_start(std::vector<double> values) { warm_start_ = std::move(values); }
    const std::optional<std::vector<double>>& warm_start() const noexcept { return warm_start_; }

private:
    lp::LpProblem base_;
    std::vector<std::size_t> binaries_;
    std::optional<std::vector<double>> warm_start_;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct MilpOutcome {
    Status status = Status::Infeasible;
    double objective_value = 0.0;
    std::vector<double> values;
    std::size_t nodes_explored = 0;
    /// Best remaining bound minus incumbent when the search stopped (>= 0).
    double proven_gap = 0.0;
    /// Objective of the root relaxation, when it was solved to optimality.
    std::optional<double> root_bound;
    /// Objective of every incumbent accepted during the search, in order.
    std::vector<double> incumbent_trace;
};

struct MilpOptions {
    std::size_t node_budget = kDefaultNodeBudget;
};

/// Throws NodeBudgetExceeded rather than returning a suboptimal answer.
MilpOutcome solve_milp(const MilpProblem& problem, const MilpOptions& options = {});

}  // namespace edr::milp

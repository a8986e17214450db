#pragma once

// Continuous linear programs with per-variable bounds, solved by a two-phase
// bounded-variable primal simplex on a dense tableau.

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace edr::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Solver tolerances. Row residuals are absolute.
inline constexpr double kPivotTol = 1e-9;
inline constexpr double kFeasibilityTol = 1e-7;
inline constexpr double kOptimalityTol = 1e-9;
inline constexpr double kBoundTol = 1e-9;
/// Larger coefficient, bound or right-hand-side magnitudes are rejected.
inline constexpr double kMaxMagnitude = 1e12;

enum class Sense { Maximize, Minimize };
enum class Relation { LessEqual, Equal, GreaterEqual };

struct Term {
    std::size_t var;
    double coeff;
};

struct Bounds {
    double lower = 0.0;
    double upper = kInf;
};

struct Constraint {
    std::vector<Term> terms;
    Relation relation;
    double rhs;
};

class LpProblem {
public:
    explicit LpProblem(Sense sense = Sense::Maximize) : sense_(sense) {}

    /// Returns the new variable's index.
    std::size_t add_variable(double objective_coeff, Bounds bounds = {});
    /// Throws std::invalid_argument if a term names an undeclared variable.
    std::size_t add_constraint(std::vector<Term> terms, Relation relation, double rhs);
    /// Throws std::invalid_argument if lower > upper.
    void set_bounds(std::size_t var, Bounds bounds);
    void set_objective(std::size_t var, double coeff);

    Sense sense() const noexcept { return sense_; }
    std::size_t num_variables() const noexcept { return objective_.size(); }
    std::size_t num_constraints() const noexcept { return constraints_.size(); }
    std::span<const double> objective() const noexcept { return objective_; }
    std::span<const Bounds> bounds() const noexcept { return bounds_; }
    std::span<const Constraint> constraints() const noexcept { return constraints_; }

    double objective_value(std::span<const double> x) const;

private:
    Sense sense_;
    std::vector<double> objective_;
    std::vector<Bounds> bounds_;
    std::vector<Constraint> constraints_;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct LpOutcome {
    Status status = Status::Infeasible;
    double objective_value = 0.0;  // meaningful when Optimal
    std::vector<double> values;    // meaningful when Optimal
    std::size_t iterations = 0;
};

/// Throws std::invalid_argument for magnitudes above kMaxMagnitude and
/// std::runtime_error if the iteration safeguard trips.
LpOutcome solve_lp(const LpProblem& problem);

/// Same problem with the variable bounds replaced by `bounds` (one per
/// variable). Used by branch-and-bound to tighten bounds without copying rows.
LpOutcome solve_lp(const LpProblem& problem, std::span<const Bounds> bounds);

struct Residuals {
    double max_row_violation = 0.0;    // how far any row is outside its relation
    double max_bound_violation = 0.0;  // how far any variable is outside its bounds
};

/// Independent feasibility check of a point.
Residuals audit(const LpProblem& problem, std::span<const double> x);
Residuals audit(const LpProblem& problem, std::span<const Bounds> bounds, std::span<const double> x);

}  // namespace edr::lp

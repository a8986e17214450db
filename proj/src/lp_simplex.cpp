#include "edr/lp.hpp"

#include "edr/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <fmt/format.h>

namespace edr::lp {

std::size_t LpProblem::add_variable(double objective_coeff, Bounds bounds)
{
    if (bounds.lower > bounds.upper) {
        throw std::invalid_argument(
            fmt::format("lp: variable {} has lower bound {} above upper bound {}",
                        objective_.size(), bounds.lower, bounds.upper));
    }
    objective_.push_back(objective_coeff);
    bounds_.push_back(bounds);
    return objective_.size() - 1;
}

std::size_t LpProblem::add_constraint(std::vector<Term> terms, Relation relation, double rhs)
{
    for (const Term& term : terms) {
        if (term.var >= objective_.size()) {
            throw std::invalid_argument(fmt::format(
                "lp: constraint {} references undeclared variable {}", constraints_.size(), term.var));
        }
    }
    constraints_.push_back(Constraint{std::move(terms), relation, rhs});
    return constraints_.size() - 1;
}

void LpProblem::set_bounds(std::size_t var, Bounds bounds)
{
    if (bounds.lower > bounds.upper) {
        throw std::invalid_argument(fmt::format(
            "lp: variable {} has lower bound {} above upper bound {}", var, bounds.lower, bounds.upper));
    }
    bounds_.at(var) = bounds;
}

void LpProblem::set_objective(std::size_t var, double coeff)
{
    objective_.at(var) = coeff;
}

double LpProblem::objective_value(std::span<const double> x) const
{
    double sum = 0.0;
    for (std::size_t k = 0; k < objective_.size(); ++k) {
        sum += objective_[k] * x[k];
    }
    return sum;
}

namespace {

void check_magnitude(double v, const char* what, std::size_t index)
{
    if (std::isnan(v) || (std::isfinite(v) && std::abs(v) > kMaxMagnitude)) {
        throw std::invalid_argument(
            fmt::format("lp: {} {} has magnitude {} (limit {:g})", what, index, v, kMaxMagnitude));
    }
}

void check_problem(const LpProblem& p, std::span<const Bounds> bounds)
{
    if (bounds.size() != p.num_variables()) {
        throw std::invalid_argument("lp: bounds span does not match the variable count");
    }
    for (std::size_t k = 0; k < p.num_variables(); ++k) {
        const double c = p.objective()[k];
        if (!std::isfinite(c)) {
            throw std::invalid_argument(fmt::format("lp: objective coefficient {} is not finite", k));
        }
        check_magnitude(c, "objective coefficient", k);
        check_magnitude(bounds[k].lower, "lower bound of variable", k);
        check_magnitude(bounds[k].upper, "upper bound of variable", k);
        if (bounds[k].lower > bounds[k].upper || bounds[k].lower == kInf ||
            bounds[k].upper == -kInf) {
            throw std::invalid_argument(fmt::format("lp: variable {} has empty bounds", k));
        }
    }
    for (std::size_t i = 0; i < p.num_constraints(); ++i) {
        const Constraint& row = p.constraints()[i];
        if (!std::isfinite(row.rhs)) {
            throw std::invalid_argument(fmt::format("lp: constraint {} has a non-finite rhs", i));
        }
        check_magnitude(row.rhs, "rhs of constraint", i);
        for (const Term& t : row.terms) {
            if (!std::isfinite(t.coeff)) {
                throw std::invalid_argument(
                    fmt::format("lp: constraint {} has a non-finite coefficient", i));
            }
            check_magnitude(t.coeff, "coefficient in constraint", i);
        }
    }
}

// How one user variable is expressed through nonnegative tableau columns.
struct VarMap {
    enum class Kind : std::uint8_t { Shift, Mirror, Split };
    Kind kind;
    std::size_t col;
    std::size_t col2;  // Split only
    double offset;     // x = offset + col (Shift) or offset - col (Mirror)
};

enum class PhaseResult { Optimal, Unbounded };

class DenseSimplex {
public:
    DenseSimplex(const LpProblem& problem, std::span<const Bounds> bounds)
        : problem_(problem), bounds_(bounds)
    {
        build();
    }

    LpOutcome solve()
    {
        LpOutcome out;
        if (num_artificial_ > 0) {
            set_phase_one_costs();
            if (run_phase() == PhaseResult::Unbounded) {
                // Phase one is bounded below by zero; reaching here is a numerical failure.
                throw std::runtime_error("lp: phase one reported unbounded");
            }
            double infeasibility = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                if (is_artificial_[basis_[i]]) {
                    infeasibility += std::max(0.0, beta_[i]);
                }
            }
            if (infeasibility > kFeasibilityTol) {
                out.status = Status::Infeasible;
                out.iterations = iterations_;
                return out;
            }
            drive_out_artificials();
        }
        for (std::size_t j = 0; j < n_; ++j) {
            if (is_artificial_[j]) {
                upper_[j] = 0.0;
            }
        }
        set_phase_two_costs();
        if (run_phase() == PhaseResult::Unbounded) {
            out.status = Status::Unbounded;
            out.iterations = iterations_;
            return out;
        }
        out.status = Status::Optimal;
        out.values = extract();
        out.objective_value = problem_.objective_value(out.values);
        out.iterations = iterations_;
        return out;
    }

private:
    double& at(std::size_t i, std::size_t j) { return tab_[i * n_ + j]; }
    double at(std::size_t i, std::size_t j) const { return tab_[i * n_ + j]; }
    std::span<double> row(std::size_t i) { return {tab_.data() + i * n_, n_}; }

    void build()
    {
        const std::size_t nv = problem_.num_variables();
        var_map_.resize(nv);
        std::size_t cols = 0;
        for (std::size_t k = 0; k < nv; ++k) {
            const Bounds b = bounds_[k];
            if (std::isfinite(b.lower)) {
                var_map_[k] = {VarMap::Kind::Shift, cols++, 0, b.lower};
                upper_.push_back(std::isfinite(b.upper) ? b.upper - b.lower : kInf);
            } else if (std::isfinite(b.upper)) {
                var_map_[k] = {VarMap::Kind::Mirror, cols++, 0, b.upper};
                upper_.push_back(kInf);
            } else {
                var_map_[k] = {VarMap::Kind::Split, cols, cols + 1, 0.0};
                cols += 2;
                upper_.push_back(kInf);
                upper_.push_back(kInf);
            }
        }
        num_structural_ = cols;

        m_ = problem_.num_constraints();
        // Count slacks and decide per row whether an artificial is needed, so
        // the tableau can be allocated once.
        std::vector<double> rhs(m_);
        std::vector<double> slack_sign(m_, 0.0);
        std::vector<double> row_sign(m_, 1.0);
        std::size_t num_slack = 0;
        for (std::size_t i = 0; i < m_; ++i) {
            const Constraint& c = problem_.constraints()[i];
            double r = c.rhs;
            for (const Term& t : c.terms) {
                const VarMap& vm = var_map_[t.var];
                if (vm.kind != VarMap::Kind::Split) {
                    r -= t.coeff * vm.offset;
                }
            }
            if (c.relation == Relation::LessEqual) {
                slack_sign[i] = 1.0;
                ++num_slack;
            } else if (c.relation == Relation::GreaterEqual) {
                slack_sign[i] = -1.0;
                ++num_slack;
            }
            if (r < 0.0) {
                row_sign[i] = -1.0;
                r = -r;
            }
            rhs[i] = r;
        }
        std::vector<bool> needs_artificial(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            needs_artificial[i] = slack_sign[i] * row_sign[i] != 1.0;
            num_artificial_ += needs_artificial[i] ? 1 : 0;
        }

        n_ = num_structural_ + num_slack + num_artificial_;
        upper_.resize(n_, kInf);
        is_artificial_.assign(n_, false);
        at_upper_.assign(n_, false);
        tab_.assign(m_ * n_, 0.0);
        beta_ = rhs;
        basis_.assign(m_, 0);

        std::size_t slack_col = num_structural_;
        std::size_t art_col = num_structural_ + num_slack;
        for (std::size_t i = 0; i < m_; ++i) {
            const Constraint& c = problem_.constraints()[i];
            const double s = row_sign[i];
            for (const Term& t : c.terms) {
                const VarMap& vm = var_map_[t.var];
                switch (vm.kind) {
                case VarMap::Kind::Shift:
                    at(i, vm.col) += s * t.coeff;
                    break;
                case VarMap::Kind::Mirror:
                    at(i, vm.col) -= s * t.coeff;
                    break;
                case VarMap::Kind::Split:
                    at(i, vm.col) += s * t.coeff;
                    at(i, vm.col2) -= s * t.coeff;
                    break;
                }
            }
            if (slack_sign[i] != 0.0) {
                at(i, slack_col) = s * slack_sign[i];
                if (!needs_artificial[i]) {
                    basis_[i] = slack_col;
                }
                ++slack_col;
            }
            if (needs_artificial[i]) {
                at(i, art_col) = 1.0;
                is_artificial_[art_col] = true;
                basis_[i] = art_col;
                ++art_col;
            }
        }
        cost_.assign(n_, 0.0);
        d_.assign(n_, 0.0);
        max_iterations_ = 50 * (m_ + n_) + 1000;
    }

    void set_phase_one_costs()
    {
        for (std::size_t j = 0; j < n_; ++j) {
            cost_[j] = is_artificial_[j] ? 1.0 : 0.0;
        }
        recompute_reduced_costs();
    }

    void set_phase_two_costs()
    {
        std::fill(cost_.begin(), cost_.end(), 0.0);
        const double sign = problem_.sense() == Sense::Maximize ? -1.0 : 1.0;
        for (std::size_t k = 0; k < var_map_.size(); ++k) {
            const double c = sign * problem_.objective()[k];
            const VarMap& vm = var_map_[k];
            switch (vm.kind) {
            case VarMap::Kind::Shift:
                cost_[vm.col] = c;
                break;
            case VarMap::Kind::Mirror:
                cost_[vm.col] = -c;
                break;
            case VarMap::Kind::Split:
                cost_[vm.col] = c;
                cost_[vm.col2] = -c;
                break;
            }
        }
        recompute_reduced_costs();
    }

    void recompute_reduced_costs()
    {
        d_ = cost_;
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = cost_[basis_[i]];
            if (cb != 0.0) {
                simd::axpy_sub(d_, row(i), cb);
            }
        }
        for (std::size_t i = 0; i < m_; ++i) {
            d_[basis_[i]] = 0.0;
        }
    }

    bool eligible(std::size_t j) const
    {
        if (at_upper_[j]) {
            return d_[j] > kOptimalityTol;
        }
        return d_[j] < -kOptimalityTol && upper_[j] > 0.0;
    }

    PhaseResult run_phase()
    {
        std::vector<bool> basic(n_, false);
        for (std::size_t i = 0; i < m_; ++i) {
            basic[basis_[i]] = true;
        }
        const std::size_t stall_limit = 2 * (m_ + n_);
        std::size_t stalled = 0;
        bool bland = false;
        std::size_t phase_iterations = 0;

        for (;;) {
            if (++phase_iterations > max_iterations_) {
                throw std::runtime_error(
                    fmt::format("lp: no convergence after {} iterations", max_iterations_));
            }
            // Pricing.
            std::size_t enter = n_;
            double best = 0.0;
            for (std::size_t j = 0; j < n_; ++j) {
                if (basic[j] || !eligible(j)) {
                    continue;
                }
                if (bland) {
                    enter = j;
                    break;
                }
                const double score = std::abs(d_[j]);
                if (score > best) {
                    best = score;
                    enter = j;
                }
            }
            if (enter == n_) {
                return PhaseResult::Optimal;
            }
            ++iterations_;

            const double sigma = at_upper_[enter] ? -1.0 : 1.0;

            // Ratio test.
            std::size_t leave_row = m_;
            double theta = kInf;
            double leave_alpha = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                const double alpha = sigma * at(i, enter);
                double ratio;
                if (alpha > kPivotTol) {
                    ratio = std::max(0.0, beta_[i]) / alpha;
                } else if (alpha < -kPivotTol && std::isfinite(upper_[basis_[i]])) {
                    ratio = std::max(0.0, upper_[basis_[i]] - beta_[i]) / -alpha;
                } else {
                    continue;
                }
                bool take = false;
                if (leave_row == m_) {
                    take = true;
                } else {
                    const double tie = 1e-12 * (1.0 + std::abs(theta));
                    if (ratio < theta - tie) {
                        take = true;
                    } else if (ratio <= theta + tie) {
                        if (bland) {
                            take = basis_[i] < basis_[leave_row];
                        } else if (std::abs(alpha) != std::abs(leave_alpha)) {
                            take = std::abs(alpha) > std::abs(leave_alpha);
                        } else {
                            take = basis_[i] < basis_[leave_row];
                        }
                    }
                }
                if (take) {
                    leave_row = i;
                    theta = ratio;
                    leave_alpha = alpha;
                }
            }

            const bool flip = std::isfinite(upper_[enter]) && upper_[enter] <= theta;
            if (!flip && leave_row == m_) {
                return PhaseResult::Unbounded;
            }
            const double step = flip ? upper_[enter] : theta;
            const double improvement = std::abs(d_[enter]) * step;

            if (step != 0.0) {
                for (std::size_t i = 0; i < m_; ++i) {
                    beta_[i] -= sigma * step * at(i, enter);
                }
            }
            if (flip) {
                at_upper_[enter] = !at_upper_[enter];
            } else {
                const double entering_value =
                    (at_upper_[enter] ? upper_[enter] : 0.0) + sigma * step;
                const std::size_t leaving = basis_[leave_row];
                at_upper_[leaving] = leave_alpha < 0.0 && upper_[leaving] > 0.0;
                pivot(leave_row, enter);
                beta_[leave_row] = entering_value;
                basic[leaving] = false;
                basic[enter] = true;
                at_upper_[enter] = false;
            }

            if (improvement > 1e-12) {
                stalled = 0;
                bland = false;
            } else if (++stalled >= stall_limit) {
                bland = true;
            }
        }
    }

    void pivot(std::size_t r, std::size_t j)
    {
        const double piv = at(r, j);
        simd::scale(row(r), 1.0 / piv);
        at(r, j) = 1.0;
        const std::span<const double> pivot_row = row(r);
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) {
                continue;
            }
            const double f = at(i, j);
            if (f != 0.0) {
                simd::axpy_sub(row(i), pivot_row, f);
                at(i, j) = 0.0;
            }
        }
        const double fd = d_[j];
        if (fd != 0.0) {
            simd::axpy_sub(d_, pivot_row, fd);
        }
        d_[j] = 0.0;
        basis_[r] = j;
    }

    // Degenerate pivots that swap basic artificials (all at zero after a
    // feasible phase one) for real columns. Rows with no usable column are
    // redundant; their artificial stays basic, pinned at zero.
    void drive_out_artificials()
    {
        std::vector<bool> basic(n_, false);
        for (std::size_t i = 0; i < m_; ++i) {
            basic[basis_[i]] = true;
        }
        for (std::size_t r = 0; r < m_; ++r) {
            if (!is_artificial_[basis_[r]]) {
                continue;
            }
            std::size_t best = n_;
            double best_abs = kPivotTol;
            for (std::size_t j = 0; j < n_; ++j) {
                if (basic[j] || is_artificial_[j]) {
                    continue;
                }
                const double a = std::abs(at(r, j));
                if (a > best_abs) {
                    best_abs = a;
                    best = j;
                }
            }
            if (best == n_) {
                continue;
            }
            const std::size_t leaving = basis_[r];
            const double value = at_upper_[best] ? upper_[best] : 0.0;
            pivot(r, best);
            beta_[r] = value;
            at_upper_[leaving] = false;
            at_upper_[best] = false;
            basic[leaving] = false;
            basic[best] = true;
        }
    }

    std::vector<double> extract() const
    {
        std::vector<double> col(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            col[j] = at_upper_[j] ? upper_[j] : 0.0;
        }
        for (std::size_t i = 0; i < m_; ++i) {
            col[basis_[i]] = beta_[i];
        }
        std::vector<double> x(var_map_.size());
        for (std::size_t k = 0; k < var_map_.size(); ++k) {
            const VarMap& vm = var_map_[k];
            double v = 0.0;
            switch (vm.kind) {
            case VarMap::Kind::Shift:
                v = vm.offset + col[vm.col];
                break;
            case VarMap::Kind::Mirror:
                v = vm.offset - col[vm.col];
                break;
            case VarMap::Kind::Split:
                v = col[vm.col] - col[vm.col2];
                break;
            }
            x[k] = std::clamp(v, bounds_[k].lower, bounds_[k].upper);
        }
        return x;
    }

    const LpProblem& problem_;
    std::span<const Bounds> bounds_;
    std::vector<VarMap> var_map_;
    std::size_t num_structural_ = 0;
    std::size_t num_artificial_ = 0;
    std::size_t m_ = 0;
    std::size_t n_ = 0;
    std::vector<double> tab_;
    std::vector<double> beta_;
    std::vector<double> upper_;
    std::vector<double> cost_;
    std::vector<double> d_;
    std::vector<std::size_t> basis_;
    std::vector<bool> at_upper_;
    std::vector<bool> is_artificial_;
    std::size_t iterations_ = 0;
    std::size_t max_iterations_ = 0;
};

}  // namespace

LpOutcome solve_lp(const LpProblem& problem)
{
    return solve_lp(problem, problem.bounds());
}

LpOutcome solve_lp(const LpProblem& problem, std::span<const Bounds> bounds)
{
    check_problem(problem, bounds);
    DenseSimplex simplex{problem, bounds};
    return simplex.solve();
}

Residuals audit(const LpProblem& problem, std::span<const double> x)
{
    return audit(problem, problem.bounds(), x);
}

Residuals audit(const LpProblem& problem, std::span<const Bounds> bounds, std::span<const double> x)
{
    Residuals r;
    for (std::size_t k = 0; k < problem.num_variables(); ++k) {
        const double below = bounds[k].lower - x[k];
        const double above = x[k] - bounds[k].upper;
        r.max_bound_violation = std::max({r.max_bound_violation, below, above});
    }
    for (const Constraint& c : problem.constraints()) {
        double lhs = 0.0;
        for (const Term& t : c.terms) {
            lhs += t.coeff * x[t.var];
        }
        double violation = 0.0;
        switch (c.relation) {
        case Relation::LessEqual:
            violation = lhs - c.rhs;
            break;
        case Relation::GreaterEqual:
            violation = c.rhs - lhs;
            break;
        case Relation::Equal:
            violation = std::abs(lhs - c.rhs);
            break;
        }
        r.max_row_violation = std::max(r.max_row_violation, violation);
    }
    return r;
}

}  // namespace edr::lp

#include "edr/milp.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include <fmt/format.h>

namespace edr::milp {

MilpProblem::MilpProblem(lp::LpProblem base, std::vector<std::size_t> binary_vars)
    : base_(std::move(base)), binaries_(std::move(binary_vars))
{
    std::sort(binaries_.begin(), binaries_.end());
    if (std::adjacent_find(binaries_.begin(), binaries_.end()) != binaries_.end()) {
        throw std::invalid_argument("milp: duplicate binary variable");
    }
    if (binaries_.size() > kMaxBinaries) {
        throw std::invalid_argument(
            fmt::format("milp: {} binaries exceeds the limit of {}", binaries_.size(), kMaxBinaries));
    }
    for (std::size_t v : binaries_) {
        if (v >= base_.num_variables()) {
            throw std::invalid_argument(fmt::format("milp: binary {} is not a variable", v));
        }
        const lp::Bounds b = base_.bounds()[v];
        if (b.lower != 0.0 || b.upper != 1.0) {
            throw std::invalid_argument(
                fmt::format("milp: binary {} must have bounds [0, 1] in the base problem", v));
        }
    }
}

namespace {

struct Node {
    std::uint64_t fixed_zero = 0;  // bit b: binaries()[b] fixed to 0
    std::uint64_t fixed_one = 0;
    double bound = lp::kInf;       // parent relaxation, in maximization sense
    std::size_t depth = 0;
    std::size_t id = 0;
};

// Bounds are quantized before comparison so that numerically equal siblings
// count as ties and the dive rule applies.
double order_key(double bound)
{
    return std::isfinite(bound) ? std::round(bound * 1e8) : bound;
}

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const
    {
        const double ka = order_key(a.bound);
        const double kb = order_key(b.bound);
        if (ka != kb) {
            return ka < kb;
        }
        if (a.depth != b.depth) {
            return a.depth < b.depth;
        }
        return a.id > b.id;
    }
};

class BranchAndBound {
public:
    BranchAndBound(const MilpProblem& problem, const MilpOptions& options)
        : problem_(problem), options_(options),
          sign_(problem.base().sense() == lp::Sense::Maximize ? 1.0 : -1.0),
          base_bounds_(problem.base().bounds().begin(), problem.base().bounds().end())
    {
    }

    MilpOutcome run()
    {
        seed_from_warm_start();

        std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
        open.push(Node{});
        std::size_t next_id = 1;

        while (!open.empty()) {
            const Node node = open.top();
            open.pop();
            if (has_incumbent_ && node.bound <= best_score_ + kAbsoluteGap) {
                note_pruned(node.bound);
                continue;
            }

            const std::vector<lp::Bounds> bounds = bounds_for(node);
            const lp::LpOutcome relax = solve_node(bounds);
            if (relax.status == lp::Status::Unbounded) {
                out_.status = Status::Unbounded;
                return finish();
            }
            if (relax.status == lp::Status::Infeasible) {
                continue;
            }
            const double score = sign_ * relax.objective_value;
            if (node.depth == 0) {
                out_.root_bound = relax.objective_value;
            }
            if (has_incumbent_ && score <= best_score_ + kAbsoluteGap) {
                note_pruned(score);
                continue;
            }

            std::size_t branch_bit = pick_fractional(node, relax.values);
            if (branch_bit == kNone) {
                const bool settled = try_polish(node, relax.values, score);
                if (settled) {
                    continue;
                }
                branch_bit = pick_any_unfixed(node, relax.values);
                if (branch_bit == kNone) {
                    continue;
                }
            }

            const double v = relax.values[problem_.binary_vars()[branch_bit]];
            Node down = node;
            down.fixed_zero |= std::uint64_t{1} << branch_bit;
            Node up = node;
            up.fixed_one |= std::uint64_t{1} << branch_bit;
            down.bound = up.bound = score;
            down.depth = up.depth = node.depth + 1;
            if (v >= 0.5) {
                up.id = next_id++;
                down.id = next_id++;
            } else {
                down.id = next_id++;
                up.id = next_id++;
            }
            open.push(down);
            open.push(up);
        }

        out_.status = has_incumbent_ ? Status::Optimal : Status::Infeasible;
        return finish();
    }

private:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    MilpOutcome finish()
    {
        if (out_.status == Status::Optimal) {
            out_.values = best_values_;
            out_.objective_value = problem_.base().objective_value(best_values_);
            out_.proven_gap = std::max(0.0, max_pruned_excess_);
        } else {
            out_.values.clear();
            out_.objective_value = 0.0;
            out_.proven_gap = 0.0;
        }
        return std::move(out_);
    }

    void note_pruned(double bound)
    {
        max_pruned_excess_ = std::max(max_pruned_excess_, bound - best_score_);
    }

    lp::LpOutcome solve_node(const std::vector<lp::Bounds>& bounds)
    {
        if (out_.nodes_explored >= options_.node_budget) {
            throw NodeBudgetExceeded(fmt::format(
                "milp: node budget of {} exhausted before optimality was proven", options_.node_budget));
        }
        ++out_.nodes_explored;
        return lp::solve_lp(problem_.base(), bounds);
    }

    std::vector<lp::Bounds> bounds_for(const Node& node) const
    {
        std::vector<lp::Bounds> bounds = base_bounds_;
        const auto& bins = problem_.binary_vars();
        for (std::size_t b = 0; b < bins.size(); ++b) {
            const std::uint64_t bit = std::uint64_t{1} << b;
            if (node.fixed_zero & bit) {
                bounds[bins[b]] = {0.0, 0.0};
            } else if (node.fixed_one & bit) {
                bounds[bins[b]] = {1.0, 1.0};
            }
        }
        return bounds;
    }

    static bool is_fixed(const Node& node, std::size_t bit)
    {
        return ((node.fixed_zero | node.fixed_one) >> bit) & 1U;
    }

    std::size_t pick_fractional(const Node& node, const std::vector<double>& x) const
    {
        std::size_t pick = kNone;
        double best = kIntegralityTol;
        const auto& bins = problem_.binary_vars();
        for (std::size_t b = 0; b < bins.size(); ++b) {
            if (is_fixed(node, b)) {
                continue;
            }
            const double v = x[bins[b]];
            const double frac = std::abs(v - std::round(v));
            if (frac > best) {
                best = frac;
                pick = b;
            }
        }
        return pick;
    }

    std::size_t pick_any_unfixed(const Node& node, const std::vector<double>& x) const
    {
        std::size_t pick = kNone;
        double best = -1.0;
        const auto& bins = problem_.binary_vars();
        for (std::size_t b = 0; b < bins.size(); ++b) {
            if (is_fixed(node, b)) {
                continue;
            }
            const double frac = std::abs(x[bins[b]] - std::round(x[bins[b]]));
            if (frac > best) {
                best = frac;
                pick = b;
            }
        }
        return pick;
    }

    // The relaxation is integral within tolerance: re-solve with every binary
    // pinned to its rounded value so the incumbent is exactly integral.
    // Returns false when the node still needs branching.
    bool try_polish(const Node& node, const std::vector<double>& x, double node_score)
    {
        Node pinned = node;
        const auto& bins = problem_.binary_vars();
        bool all_fixed = true;
        for (std::size_t b = 0; b < bins.size(); ++b) {
            if (is_fixed(node, b)) {
                continue;
            }
            all_fixed = false;
            if (std::round(x[bins[b]]) >= 1.0) {
                pinned.fixed_one |= std::uint64_t{1} << b;
            } else {
                pinned.fixed_zero |= std::uint64_t{1} << b;
            }
        }
        lp::LpOutcome exact;
        if (all_fixed) {
            exact.status = lp::Status::Optimal;
            exact.values = x;
            exact.objective_value = problem_.base().objective_value(x);
        } else {
            exact = solve_node(bounds_for(pinned));
        }
        if (exact.status != lp::Status::Optimal) {
            return all_fixed;
        }
        const double score = sign_ * exact.objective_value;
        if (!all_fixed && node_score - score > kAbsoluteGap) {
            accept(exact.values, score);
            return false;
        }
        accept(exact.values, score);
        return true;
    }

    void accept(const std::vector<double>& values, double score)
    {
        if (!has_incumbent_ || score > best_score_) {
            has_incumbent_ = true;
            best_score_ = score;
            best_values_ = values;
            out_.incumbent_trace.push_back(sign_ * score);
        }
    }

    void seed_from_warm_start()
    {
        const auto& start = problem_.warm_start();
        if (!start || start->size() != problem_.base().num_variables()) {
            return;
        }
        const lp::Residuals r = lp::audit(problem_.base(), *start);
        if (r.max_row_violation > lp::kFeasibilityTol || r.max_bound_violation > lp::kBoundTol) {
            return;
        }
        for (std::size_t v : problem_.binary_vars()) {
            const double x = (*start)[v];
            if (x != 0.0 && x != 1.0) {
                return;
            }
        }
        accept(*start, sign_ * problem_.base().objective_value(*start));
    }

    const MilpProblem& problem_;
    MilpOptions options_;
    double sign_;
    std::vector<lp::Bounds> base_bounds_;
    MilpOutcome out_;
    bool has_incumbent_ = false;
    double best_score_ = -lp::kInf;
    double max_pruned_excess_ = 0.0;
    std::vector<double> best_values_;
};

}  // namespace

MilpOutcome solve_milp(const MilpProblem& problem, const MilpOptions& options)
{
    BranchAndBound search{problem, options};
    return search.run();
}

}  // namespace edr::milp

#include "edr/milp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace edr;
using lp::Bounds;
using lp::LpProblem;
using lp::Relation;
using lp::Sense;

namespace {

// Best objective over all 2^k binary assignments, each completed by an LP
// over the continuous variables with the binaries fixed through bounds.
std::optional<double> enumerate_assignments(const milp::MilpProblem& p)
{
    const auto& bins = p.binary_vars();
    std::optional<double> best;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bins.size()); ++mask) {
        std::vector<Bounds> b(p.base().bounds().begin(), p.base().bounds().end());
        for (std::size_t i = 0; i < bins.size(); ++i) {
            const double v = (mask >> i) & 1U ? 1.0 : 0.0;
            b[bins[i]] = Bounds{v, v};
        }
        const lp::LpOutcome out = lp::solve_lp(p.base(), b);
        if (out.status == lp::Status::Optimal && (!best || out.objective_value > *best)) {
            best = out.objective_value;
        }
    }
    return best;
}

// Knapsack: maximize value subject to weight limit, pure binaries.
struct Knapsack {
    std::vector<double> value;
    std::vector<double> weight;
    double capacity;
};

double knapsack_brute_force(const Knapsack& k)
{
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k.value.size()); ++mask) {
        double w = 0.0;
        double v = 0.0;
        for (std::size_t i = 0; i < k.value.size(); ++i) {
            if ((mask >> i) & 1U) {
                w += k.weight[i];
                v += k.value[i];
            }
        }
        if (w <= k.capacity) {
            best = std::max(best, v);
        }
    }
    return best;
}

milp::MilpProblem knapsack_problem(const Knapsack& k)
{
    LpProblem lp(Sense::Maximize);
    std::vector<lp::Term> row;
    std::vector<std::size_t> bins;
    for (std::size_t i = 0; i < k.value.size(); ++i) {
        const auto v = lp.add_variable(k.value[i], Bounds{0.0, 1.0});
        row.push_back({v, k.weight[i]});
        bins.push_back(v);
    }
    lp.add_constraint(row, Relation::LessEqual, k.capacity);
    return milp::MilpProblem(std::move(lp), bins);
}

milp::MilpProblem random_mixed(std::mt19937_64& rng, std::size_t binaries, std::size_t continuous)
{
    std::uniform_int_distribution<int> coeff(-6, 6);
    std::uniform_int_distribution<int> big(1, 8);
    LpProblem lp(Sense::Maximize);
    std::vector<std::size_t> bins;
    std::vector<std::size_t> conts;
    for (std::size_t i = 0; i < binaries; ++i) {
        bins.push_back(lp.add_variable(coeff(rng), Bounds{0.0, 1.0}));
    }
    for (std::size_t j = 0; j < continuous; ++j) {
        conts.push_back(lp.add_variable(coeff(rng), Bounds{0.0, static_cast<double>(big(rng))}));
    }
    // Big-M links x_j <= M * b_i plus a few random rows.
    for (std::size_t j = 0; j < continuous; ++j) {
        const std::size_t b = bins[j % binaries];
        lp.add_constraint({{conts[j], 1.0}, {b, -8.0}}, Relation::LessEqual, 0.0);
    }
    for (int r = 0; r < 3; ++r) {
        std::vector<lp::Term> terms;
        for (std::size_t v = 0; v < binaries + continuous; ++v) {
            if (const int c = coeff(rng); c != 0) {
                terms.push_back({v, static_cast<double>(c)});
            }
        }
        lp.add_constraint(terms, Relation::LessEqual, std::uniform_int_distribution<int>(0, 12)(rng));
    }
    return milp::MilpProblem(std::move(lp), bins);
}

}  // namespace

TEST(Milp, RoundingDownForced)
{
    LpProblem lp;
    const auto x = lp.add_variable(1.0, Bounds{0.0, 1.0});
    lp.add_constraint({{x, 2.0}}, Relation::LessEqual, 1.0);
    const milp::MilpOutcome out = milp::solve_milp(milp::MilpProblem(lp, {x}));
    ASSERT_EQ(out.status, milp::Status::Optimal);
    EXPECT_EQ(out.values[x], 0.0);
    EXPECT_EQ(out.objective_value, 0.0);
    ASSERT_TRUE(out.root_bound);
    EXPECT_NEAR(*out.root_bound, 0.5, 1e-9);
}

TEST(Milp, SymmetricOptimaBreakTiesDeterministically)
{
    LpProblem lp;
    const auto x = lp.add_variable(1.0, Bounds{0.0, 1.0});
    const auto y = lp.add_variable(1.0, Bounds{0.0, 1.0});
    lp.add_constraint({{x, 1.0}, {y, 1.0}}, Relation::LessEqual, 1.0);
    const milp::MilpProblem p(lp, {x, y});
    const milp::MilpOutcome a = milp::solve_milp(p);
    const milp::MilpOutcome b = milp::solve_milp(p);
    ASSERT_EQ(a.status, milp::Status::Optimal);
    EXPECT_NEAR(a.objective_value, 1.0, 1e-9);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.values[x] + a.values[y], 1.0);
}

TEST(Milp, Infeasible)
{
    LpProblem lp;
    const auto x = lp.add_variable(1.0, Bounds{0.0, 1.0});
    lp.add_constraint({{x, 2.0}}, Relation::Equal, 1.0);
    EXPECT_EQ(milp::solve_milp(milp::MilpProblem(lp, {x})).status, milp::Status::Infeasible);
}

TEST(Milp, RejectsBadBinaries)
{
    LpProblem lp;
    const auto x = lp.add_variable(1.0, Bounds{0.0, 2.0});
    EXPECT_THROW(milp::MilpProblem(lp, {x}), std::invalid_argument);
    EXPECT_THROW(milp::MilpProblem(lp, {7}), std::invalid_argument);

    LpProblem many;
    std::vector<std::size_t> bins;
    for (std::size_t i = 0; i <= milp::kMaxBinaries; ++i) {
        bins.push_back(many.add_variable(1.0, Bounds{0.0, 1.0}));
    }
    EXPECT_THROW(milp::MilpProblem(many, bins), std::invalid_argument);
}

TEST(Milp, KnapsackMatchesBruteForce)
{
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> value(1, 30);
    std::uniform_int_distribution<int> weight(1, 20);
    for (int trial = 0; trial < 40; ++trial) {
        Knapsack k;
        const std::size_t n = 4 + trial % 9;
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            k.value.push_back(value(rng));
            k.weight.push_back(weight(rng));
            total += k.weight.back();
        }
        k.capacity = std::floor(total * 0.45);
        const milp::MilpOutcome out = milp::solve_milp(knapsack_problem(k));
        ASSERT_EQ(out.status, milp::Status::Optimal);
        EXPECT_NEAR(out.objective_value, knapsack_brute_force(k), 1e-6) << "trial " << trial;
        for (double v : out.values) {
            EXPECT_TRUE(v == 0.0 || v == 1.0);
        }
    }
}

TEST(Milp, MixedProblemsMatchEnumeration)
{
    std::mt19937_64 rng(23);
    int solved = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const milp::MilpProblem p = random_mixed(rng, 2 + trial % 5, 1 + trial % 4);
        const auto oracle = enumerate_assignments(p);
        const milp::MilpOutcome out = milp::solve_milp(p);
        if (!oracle) {
            EXPECT_EQ(out.status, milp::Status::Infeasible) << "trial " << trial;
            continue;
        }
        ASSERT_EQ(out.status, milp::Status::Optimal) << "trial " << trial;
        EXPECT_NEAR(out.objective_value, *oracle, 1e-6) << "trial " << trial;
        ++solved;

        // Bound sanity and incumbent ordering.
        ASSERT_TRUE(out.root_bound);
        EXPECT_GE(*out.root_bound, out.objective_value - 1e-9);
        ASSERT_FALSE(out.incumbent_trace.empty());
        for (double inc : out.incumbent_trace) {
            EXPECT_LE(inc, out.objective_value + 1e-9);
        }
        EXPECT_LE(out.proven_gap, milp::kAbsoluteGap);

        // Integral values, and the same objective through the LP alone.
        std::vector<Bounds> pinned(p.base().bounds().begin(), p.base().bounds().end());
        for (std::size_t b : p.binary_vars()) {
            EXPECT_TRUE(out.values[b] == 0.0 || out.values[b] == 1.0);
            pinned[b] = Bounds{out.values[b], out.values[b]};
        }
        const lp::LpOutcome re = lp::solve_lp(p.base(), pinned);
        ASSERT_EQ(re.status, lp::Status::Optimal);
        EXPECT_NEAR(re.objective_value, out.objective_value, 1e-7);
    }
    EXPECT_GT(solved, 60);
}

TEST(Milp, NodeBudgetIsAnError)
{
    Knapsack k;
    for (int i = 0; i < 14; ++i) {
        k.value.push_back(10 + i);
        k.weight.push_back(9 + i);
    }
    k.capacity = 60.5;
    milp::MilpOptions tiny;
    tiny.node_budget = 2;
    EXPECT_THROW(milp::solve_milp(knapsack_problem(k), tiny), milp::NodeBudgetExceeded);
}

TEST(Milp, WarmStartSeedsIncumbent)
{
    Knapsack k{{5, 4, 3}, {4, 3, 2}, 5};
    milp::MilpProblem p = knapsack_problem(k);
    p.set_warm_start({0.0, 1.0, 1.0});
    const milp::MilpOutcome out = milp::solve_milp(p);
    ASSERT_EQ(out.status, milp::Status::Optimal);
    ASSERT_FALSE(out.incumbent_trace.empty());
    EXPECT_NEAR(out.incumbent_trace.front(), 7.0, 1e-9);
    EXPECT_NEAR(out.objective_value, 7.0, 1e-9);
}

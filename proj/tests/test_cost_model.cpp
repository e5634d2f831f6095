#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "qre/cost_model.hpp"
#include "qre/error.hpp"
#include "qre/parallel.hpp"
#include "qre/trotter_bound.hpp"

namespace qre::cost {
namespace {

const auto kAvg = SynthesisModel::fallback_average();
const auto kDet = SynthesisModel::deterministic_worst_case();
const auto kOpt = PhaseEstimationModel::optimal_surrogate();

// The cost formula spelled out in extended precision.
long double formula(long double M, long double e, long double e1, long double e2, long double e3,
                    long double alpha, long double beta, long double g, long double d) {
    const long double reps = std::ceil(alpha / e1);
    const long double steps = std::ceil(beta * std::sqrt(e / e2));
    return 2 * M * reps * steps * (g * std::log2(2 * M * steps / e3) + d);
}

TEST(Presets, ConstantsAndNames) {
    EXPECT_DOUBLE_EQ(PhaseEstimationModel::standard_qpe().alpha, 8 * std::numbers::pi);
    EXPECT_DOUBLE_EQ(PhaseEstimationModel::rfpe().alpha, 2.3);
    EXPECT_DOUBLE_EQ(kOpt.alpha, std::numbers::pi / 2);
    EXPECT_EQ(kDet.gamma, 4.0);
    EXPECT_EQ(kDet.delta, 11.0);
    EXPECT_EQ(kAvg.gamma, 1.15);
    EXPECT_EQ(kAvg.delta, 9.2);
    EXPECT_EQ(PhaseEstimationModel::from_name("rfpe").name, "rfpe");
    EXPECT_THROW(PhaseEstimationModel::from_name("magic"), ValidationError);
    EXPECT_THROW(SynthesisModel::from_name("magic"), ValidationError);
    EXPECT_THROW(strategy_from_string("magic"), ValidationError);
    EXPECT_EQ(strategy_from_string("PAR"), Strategy::par);
    EXPECT_EQ(synthesis_lower_bound(10), 31.0);
}

TEST(Budget, RulesAndValidation) {
    const auto w = ErrorBudget::equal_split(1e-4, Combination::worst_case);
    EXPECT_NEAR(w.combined(), 1e-4, 1e-18);
    EXPECT_TRUE(w.valid());
    const auto v = ErrorBudget::equal_split(1e-4, Combination::variance);
    EXPECT_NEAR(v.combined(), 1e-4, 1e-18);
    EXPECT_TRUE(v.valid());
    ErrorBudget bad{1e-4, 5e-5, 5e-5, 1e-5, Combination::worst_case};
    EXPECT_FALSE(bad.valid());
    EXPECT_THROW(bad.validate(), ValidationError);
    bad.combination = Combination::variance;  // 5e-5 + hypot(5e-5, 1e-5) > 1e-4
    EXPECT_FALSE(bad.valid());
    ErrorBudget ok{1e-4, 4e-5, 5e-5, 3e-5, Combination::variance};  // hypot = 5e-5
    EXPECT_TRUE(ok.valid());
    ErrorBudget zero{1e-4, 0, 5e-5, 1e-5, Combination::worst_case};
    EXPECT_THROW(zero.validate(), ValidationError);
}

TEST(Evaluate, WorkedExampleAgainstExtendedPrecision) {
    const ErrorBudget b{1e-4, 5e-5, 2.5e-5, 2.5e-5, Combination::worst_case};
    const auto r = evaluate_cost(1e6, b, 100, kOpt, kAvg);
    const long double ref = formula(1e6L, 1e-4L, 5e-5L, 2.5e-5L, 2.5e-5L,
                                    std::numbers::pi_v<long double> / 2, 100, 1.15L, 9.2L);
    EXPECT_LT(std::abs(static_cast<long double>(r.t_count) - ref) / ref, 1e-12L);
    EXPECT_NEAR(r.t_count, 7.5e14, 0.01 * 7.5e14);
    EXPECT_EQ(r.pe_repetitions, 31416u);
    EXPECT_EQ(r.trotter_steps_per_unit_time, 200u);
    EXPECT_DOUBLE_EQ(r.rotation_count, 2e6 * 31416 * 200);
    EXPECT_NEAR(r.t_count, r.rotation_count * r.t_per_rotation, 1e-3);
}

TEST(Evaluate, FullTrotterShareGivesBetaSteps) {
    const double M = 1e5, beta = 37, eps = 1e-3;
    const ErrorBudget b{eps, 1e-4, eps, 1e-4, Combination::worst_case};
    const double reps = std::ceil(kOpt.alpha / 1e-4);
    const double per = kAvg.gamma * std::log2(2 * M * beta / 1e-4) + kAvg.delta;
    EXPECT_DOUBLE_EQ(cost_function(M, b, beta, kOpt.alpha, kAvg.gamma, kAvg.delta),
                     2 * M * reps * beta * per);
}

TEST(Evaluate, HalvingEpsilonOneDoublesRepetitions) {
    const PhaseEstimationModel pe{"unit", 2.0};
    ErrorBudget b{1e-3, 2.0 / 1024, 1e-4, 1e-4, Combination::worst_case};
    b.epsilon_total = 1.0;
    const auto a = evaluate_cost(1e4, b, 10, pe, kAvg);
    b.epsilon1_pe /= 2;
    const auto c = evaluate_cost(1e4, b, 10, pe, kAvg);
    EXPECT_EQ(a.pe_repetitions, 1024u);
    EXPECT_EQ(c.pe_repetitions, 2 * a.pe_repetitions);
    // the smooth form doubles exactly as well
    b.epsilon1_pe *= 2;
    const double s1 = cost_function_smooth(1e4, b, 10, 2.0, 1.15, 9.2);
    b.epsilon1_pe /= 2;
    EXPECT_NEAR(cost_function_smooth(1e4, b, 10, 2.0, 1.15, 9.2) / s1, 2.0, 1e-14);
}

TEST(Evaluate, MonotoneInEachComponent) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> lg(-3, 0);
    for (int k = 0; k < 2000; ++k) {
        const double eps = 1e-4;
        ErrorBudget b{eps, eps * std::pow(10, lg(rng)) / 3, eps * std::pow(10, lg(rng)) / 3,
                      eps * std::pow(10, lg(rng)) / 3, Combination::worst_case};
        const double base = cost_function_smooth(1e6, b, 100, kOpt.alpha, 1.15, 9.2);
        for (double* c : {&b.epsilon1_pe, &b.epsilon2_trotter, &b.epsilon3_synth}) {
            const double keep = *c;
            *c *= 1.3;
            EXPECT_LE(cost_function_smooth(1e6, b, 100, kOpt.alpha, 1.15, 9.2), base);
            *c = keep;
        }
    }
}

TEST(Evaluate, TimeIdentity) {
    const ErrorBudget b{1e-4, 5e-5, 2.5e-5, 2.5e-5, Combination::worst_case};
    const auto r = evaluate_cost(6.1e6, b, 166, kOpt, kAvg);
    EXPECT_DOUBLE_EQ(r.wall_time * 1e8, r.t_count);
    const auto s = strategy_report(r, Strategy::serial, {});
    EXPECT_DOUBLE_EQ(s.wall_time * 1e8, s.t_count);
}

TEST(Evaluate, Errors) {
    const ErrorBudget b{1e-4, 5e-5, 2.5e-5, 2.5e-5, Combination::worst_case};
    EXPECT_THROW(evaluate_cost(0.5, b, 100, kOpt, kAvg), ValidationError);
    EXPECT_THROW(evaluate_cost(1e6, b, 0.5, kOpt, kAvg), ValidationError);
    ErrorBudget over = b;
    over.epsilon1_pe = 1e-4;
    EXPECT_THROW(evaluate_cost(1e6, over, 100, kOpt, kAvg), ValidationError);
    // log argument <= 1
    const ErrorBudget huge{10.0, 2.5, 2.5, 5.0, Combination::worst_case};
    EXPECT_THROW(evaluate_cost(1, huge, 1, kOpt, kAvg), ValidationError);
    EXPECT_THROW(evaluate_cost(1e6, b, 100, PhaseEstimationModel{"x", 0.0}, kAvg), ValidationError);
}

TEST(Optimize, ConstantSynthesisRecoversTwoToOneSplit) {
    const SynthesisModel flat{"flat", 0.0, 10.0};
    const auto r = optimize_budget_detailed(1e6, 1e-4, 100, kOpt, flat, Combination::worst_case);
    const auto& s = r.smooth_budget;
    EXPECT_NEAR(s.epsilon1_pe / s.epsilon2_trotter, 2.0, 1e-9);
    EXPECT_LT(s.epsilon3_synth, 1e-4 * 1e-6);
}

TEST(Optimize, BeatsEqualSplit) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> lm(3, 8), lb(0, 3);
    for (auto rule : {Combination::worst_case, Combination::variance})
        for (int k = 0; k < 8; ++k) {
            const double M = std::pow(10, lm(rng));
            const double beta = std::ceil(std::pow(10, lb(rng)));
            const auto r = optimize_budget_detailed(M, 1e-4, beta, kOpt, kAvg, rule);
            const auto eq = ErrorBudget::equal_split(1e-4, rule);
            EXPECT_TRUE(r.budget.valid());
            EXPECT_LE(r.cost, cost_function(M, eq, beta, kOpt.alpha, 1.15, 9.2));
            EXPECT_LE(r.cost, r.smooth_budget_exact_cost);
            EXPECT_DOUBLE_EQ(r.cost, cost_function(M, r.budget, beta, kOpt.alpha, 1.15, 9.2));
        }
}

// Exhaustive 200^3 log grid; the optimizer must be within 0.1% of its minimum.
double grid_minimum(double M, double eps, double beta, double alpha, const SynthesisModel& s,
                    Combination rule) {
    constexpr int n = 200;
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = eps * std::pow(10.0, -4.0 + 4.0 * i / (n - 1));
    double best = std::numeric_limits<double>::infinity();
    for (double e1 : g)
        for (double e2 : g)
            for (double e3 : g) {
                const ErrorBudget b{eps, e1, e2, e3, rule};
                if (b.combined() > eps) continue;
                best = std::min(best, cost_function(M, b, beta, alpha, s.gamma, s.delta));
            }
    return best;
}

TEST(Optimize, WithinOneTenthPercentOfBruteForce) {
    for (auto rule : {Combination::worst_case, Combination::variance}) {
        const auto r = optimize_budget_detailed(6.1e6, 1e-4, 166, kOpt, kAvg, rule);
        EXPECT_LE(r.cost, 1.001 * grid_minimum(6.1e6, 1e-4, 166, kOpt.alpha, kAvg, rule)) << to_string(rule);
    }
}

// Optimized rescaled-case serial cost lands within a factor 5 of the published 1.2e15;
// the residual gap is systematic and reported rather than calibrated away.
TEST(Optimize, StructureOneRescaledWithinFactorFive) {
    const auto b = optimize_budget(6.1e6, 1e-4, 166, kOpt, kAvg, Combination::worst_case);
    const double c = evaluate_cost(6.1e6, b, 166, kOpt, kAvg).t_count;
    const double ratio = c / 1.2e15;
    EXPECT_LT(ratio, 5.0);
    EXPECT_GT(ratio, 0.2);
}

TEST(Optimize, AccuracyScalingBand) {
    const double beta_tight = 166;
    const double beta_loose = static_cast<double>(trotter::tolerant_ceil(beta_tight * std::sqrt(0.1)));
    const auto tight = optimize_budget_detailed(6.1e6, 1e-4, beta_tight, kOpt, kAvg, Combination::worst_case);
    const auto loose = optimize_budget_detailed(6.1e6, 1e-3, beta_loose, kOpt, kAvg, Combination::worst_case);
    const double ratio = tight.cost / loose.cost;
    EXPECT_GE(ratio, 8.0);
    EXPECT_LE(ratio, 35.0);
}

LogicalCostReport base_report(double rotations, double L) {
    LogicalCostReport r;
    r.rotation_count = rotations;
    r.log2_inverse_synthesis_error = L;
    r.trotter_steps_per_unit_time = 10;
    r.pe_repetitions = 7;
    r.t_gate_seconds = 10e-9;
    return r;
}

TEST(Strategy, NestingOverSerialRatio) {
    const auto b = optimize_budget(6.1e6, 1e-4, 166, kOpt, kAvg, Combination::worst_case);
    const auto base = evaluate_cost(6.1e6, b, 166, kOpt, kAvg);
    const StrategyParams p{26.43, 0, 0, 108, {}};
    const auto s = strategy_report(base, Strategy::serial, p);
    const auto n = strategy_report(base, Strategy::nesting, p);
    const double L = base.log2_inverse_synthesis_error;
    EXPECT_NEAR(n.t_count / s.t_count, (4 * L + 11) / (1.15 * L + 9.2), 1e-12);
    EXPECT_NEAR(n.t_count / s.t_count, 3.5e15 / 1.1e15, 0.1 * 3.5 / 1.1);
    EXPECT_DOUBLE_EQ(n.wall_time, n.t_count * 1e-8 / 26.43);
    EXPECT_EQ(n.synthesis_name, "deterministic_worst_case");
    EXPECT_EQ(s.synthesis_name, "fallback_average");
}

TEST(Strategy, ParTimeFromBackDerivedRotations) {
    const double L = 47.0;
    const double rotations = 1.1e15 / (1.15 * L + 9.2);
    const auto r = strategy_report(base_report(rotations, L), Strategy::par, {1, 9, 199, 108, {}});
    const double per = (2.0 - 11.0 / 512) + 208.0 / 512;
    EXPECT_NEAR(r.wall_time, rotations * per * 1e-8, 1e-6 * r.wall_time);
    EXPECT_NEAR(r.wall_time / 3600, 110, 0.1 * 110);
    EXPECT_DOUBLE_EQ(r.t_count, rotations * 9 * 199);
    EXPECT_EQ(r.rotation_factories, 1872u);
    EXPECT_EQ(r.logical_qubits, 1982u);
}

TEST(Strategy, ParDefaultsToDeterministicCost) {
    const double L = 40.0;
    const auto r = strategy_report(base_report(1e9, L), Strategy::par, {1, 3, 0, 20, {}});
    EXPECT_EQ(r.par_synthesis_cost, 171u);  // ceil(4*40 + 11)
}

TEST(Strategy, UnitParallelismMatchesDeterministicSerialTime) {
    const auto base = base_report(1e12, 45.0);
    const auto n = strategy_report(base, Strategy::nesting, {1.0, 0, 0, 50, {}});
    EXPECT_DOUBLE_EQ(n.wall_time, 1e12 * (4 * 45.0 + 11) * 1e-8);
}

TEST(Strategy, CliffordModes) {
    const auto base = base_report(1e10, 45.0);
    const auto ratio = strategy_report(base, Strategy::serial, {1, 0, 0, 10, {}});
    EXPECT_TRUE(ratio.clifford_from_ratio);
    EXPECT_DOUBLE_EQ(ratio.clifford_count, kCliffordPerT * ratio.t_count);
    const auto par = strategy_report(base, Strategy::par, {1, 2, 100, 10, {}});
    EXPECT_DOUBLE_EQ(par.clifford_count, kCliffordPerTPar * par.t_count);
    const auto circ = strategy_report(base, Strategy::serial, {1, 0, 0, 10, 1234.0});
    EXPECT_FALSE(circ.clifford_from_ratio);
    EXPECT_DOUBLE_EQ(circ.clifford_count, 1234.0 * 10 * 7);
}

TEST(Strategy, Errors) {
    const auto base = base_report(1e10, 45.0);
    EXPECT_THROW(strategy_report(base, Strategy::nesting, {0.5, 0, 0, 10, {}}), ValidationError);
    EXPECT_THROW(strategy_report(base, Strategy::par, {1, 0, 0, 10, {}}), ValidationError);
}

TEST(LogicalQubits, TableValues) {
    EXPECT_EQ(logical_qubit_count(108, Strategy::serial, 1, 0), 111u);
    EXPECT_NEAR(static_cast<double>(logical_qubit_count(114, Strategy::nesting, 27.5, 0)), 142, 3);
    EXPECT_EQ(logical_qubit_count(114, Strategy::nesting, 27.5, 0), 145u);
    EXPECT_EQ(logical_qubit_count(108, Strategy::par, 1, parallel::par_rotation_factories({9, 1, 199})), 1982u);
    EXPECT_THROW(logical_qubit_count(10, Strategy::nesting, 0.0, 0), ValidationError);
}

}  // namespace
}  // namespace qre::cost

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace qre::cost {

struct PhaseEstimationModel {
    std::string name;
    double alpha = 0.0;  // repetitions = ceil(alpha / epsilon1)

    static PhaseEstimationModel standard_qpe();       // 8 pi
    static PhaseEstimationModel rfpe();               // 2.3
    static PhaseEstimationModel optimal_surrogate();  // pi / 2
    static PhaseEstimationModel from_name(std::string_view name);

    void validate() const;
};

// T gates per rotation synthesized to error eps: gamma log2(1/eps) + delta.
struct SynthesisModel {
    std::string name;
    double gamma = 0.0;
    double delta = 0.0;

    static SynthesisModel deterministic_worst_case();  // (4, 11)
    static SynthesisModel fallback_average();          // (1.15, 9.2)
    static SynthesisModel from_name(std::string_view name);

    double t_per_rotation(double log2_inverse_error) const {
        return gamma * log2_inverse_error + delta;
    }
};

// 4 log2(1/eps) - 9: no deterministic synthesis beats this.
double synthesis_lower_bound(double log2_inverse_error);

enum class Combination { worst_case, variance };
std::string_view to_string(Combination c);
Combination combination_from_string(std::string_view s);

struct ErrorBudget {
    double epsilon_total = 0.0;
    double epsilon1_pe = 0.0;
    double epsilon2_trotter = 0.0;
    double epsilon3_synth = 0.0;
    Combination combination = Combination::worst_case;

    // Combined error under the budget's rule.
    double combined() const;
    bool valid() const;
    void validate() const;

    static ErrorBudget equal_split(double epsilon_total, Combination c);
};

enum class Strategy { serial, nesting, par };
std::string_view to_string(Strategy s);
Strategy strategy_from_string(std::string_view s);

inline constexpr double kDefaultTGateSeconds = 10e-9;
inline constexpr double kCliffordPerT = 1.55;     // calibrated on published serial/nesting rows
inline constexpr double kCliffordPerTPar = 1.0;   // same table, PAR rows

struct LogicalCostReport {
    Strategy strategy = Strategy::serial;
    double t_count = 0.0;
    double clifford_count = 0.0;
    bool clifford_from_ratio = true;
    double rotation_count = 0.0;
    std::uint64_t trotter_steps_per_unit_time = 0;
    std::uint64_t pe_repetitions = 0;
    std::uint64_t logical_qubits = 0;
    double wall_time = 0.0;  // seconds
    ErrorBudget budget;

    // Inputs and intermediates, kept so downstream stages are self-contained.
    double M = 0.0;
    double beta = 0.0;
    double alpha = 0.0;
    std::string pe_name;
    std::string synthesis_name;
    double gamma = 0.0;
    double delta = 0.0;
    double log2_inverse_synthesis_error = 0.0;  // L = log2(2M steps / eps3)
    double t_per_rotation = 0.0;
    bool synthesis_above_lower_bound = true;
    double t_gate_seconds = kDefaultTGateSeconds;
    int n_spin_orbitals = 0;
    double parallelism = 1.0;
    std::uint64_t par_levels = 0;
    std::uint64_t par_synthesis_cost = 0;
    std::uint64_t rotation_factories = 0;
};

// The cost formula as written, ceilings included. Returns the serial-style base report.
LogicalCostReport evaluate_cost(double M, const ErrorBudget& budget, double beta,
                                const PhaseEstimationModel& pe, const SynthesisModel& synth,
                                double t_gate_seconds = kDefaultTGateSeconds);

// Raw total T count with the same rules (no report assembly).
double cost_function(double M, const ErrorBudget& budget, double beta, double alpha, double gamma,
                     double delta);

// Smooth surrogate without ceilings and with beta alone inside the logarithm.
double cost_function_smooth(double M, const ErrorBudget& budget, double beta, double alpha,
                            double gamma, double delta);

struct OptimizationResult {
    ErrorBudget budget;         // exact integer optimum
    double cost = 0.0;          // exact cost at budget
    ErrorBudget smooth_budget;  // surrogate optimum
    double smooth_cost = 0.0;   // surrogate value there
    double smooth_budget_exact_cost = 0.0;  // exact cost at the surrogate optimum
};

OptimizationResult optimize_budget_detailed(double M, double epsilon_total, double beta,
                                            const PhaseEstimationModel& pe,
                                            const SynthesisModel& synth, Combination combination);

ErrorBudget optimize_budget(double M, double epsilon_total, double beta,
                            const PhaseEstimationModel& pe, const SynthesisModel& synth,
                            Combination combination);

struct StrategyParams {
    double parallelism = 1.0;         // nesting
    std::uint64_t par_levels = 0;     // PAR n
    std::uint64_t par_synthesis_cost = 0;  // PAR C; 0 = deterministic cost at operative L
    int n_spin_orbitals = 0;
    std::optional<double> clifford_per_step;  // from explicit circuits when available
};

LogicalCostReport strategy_report(const LogicalCostReport& base, Strategy strategy,
                                  const StrategyParams& params);

std::uint64_t logical_qubit_count(int n_spin_orbitals, Strategy strategy, double parallelism,
                                  std::uint64_t par_ancillas);

}  // namespace qre::cost

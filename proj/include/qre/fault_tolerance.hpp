#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qre/cost_model.hpp"

namespace qre::ft {

// p_L(d) = prefactor * (p / threshold)^((d+1)/2)
struct LogicalErrorModel {
    double prefactor = 0.1;
    double threshold = 1e-2;
};

// How many logical qubits the processor block holds.
enum class ProcessorConvention {
    standard,        // serial n+3, PAR n+2, nesting n+1
    logical_report,  // whatever the logical cost report carries
};

struct FTParams {
    double p_clifford = 1e-3;
    double p_inject = -1.0;  // < 0 means same as p_clifford
    double t_phys = 10e-9;
    double target_total_failure = 0.1;  // processor distance budget
    double t_failure_budget = 0.5;      // distillation budget over all T gates
    LogicalErrorModel logical_model;
    double kappa_factory = 7.6;
    double distillation_locations_per_distance = 500.0;  // first rounds: p_L(d) <= need / (this * d)
    ProcessorConvention processor_convention = ProcessorConvention::standard;

    double injection_error() const { return p_inject < 0 ? p_clifford : p_inject; }
    void validate() const;
};

// Injection error equal to the Clifford error, and the fixed-injection variant.
FTParams standard_params(double p_clifford);
FTParams topological_params(double p_clifford, double p_inject = 1e-4);

double logical_error_rate(int d, double p, const LogicalErrorModel& m = {});

// Smallest odd d with p_L(d) <= target.
int code_distance(double per_operation_error_target, const FTParams& params);
int code_distance(double per_operation_error_target, double p, const LogicalErrorModel& m);

std::uint64_t qubits_per_logical(int d);

// eps_0 = p_inject, eps_{k+1} = 35 eps_k^3.
std::vector<double> distillation_errors(double p_inject, int rounds);
int distillation_rounds(double p_inject, double per_t_error_target);

// rounds: 0 -> bare injection patch, 1 -> 16 logical, 2 -> 240 logical at the first-round distance.
// distances ordered final round first, as listed in the table.
std::uint64_t t_factory_footprint(int rounds, std::span<const int> distances);

std::uint64_t t_factory_count(double t_rate, std::span<const int> distances, const FTParams& params);

struct PhysicalCostReport {
    cost::Strategy strategy = cost::Strategy::serial;
    double p_clifford = 0.0;
    double p_inject = 0.0;
    std::vector<int> code_distances;  // processor/final round first, then earlier rounds
    int processor_distance = 0;
    int distillation_rounds = 0;
    std::uint64_t processor_logical_qubits = 0;
    std::uint64_t logical_report_qubits = 0;  // the logical-report convention, for comparison
    std::uint64_t qubits_per_logical = 0;
    std::uint64_t processor_qubits = 0;
    std::uint64_t rotation_factory_count = 0;
    std::uint64_t qubits_per_rotation_factory = 0;
    std::uint64_t rotation_factory_qubits = 0;
    std::uint64_t t_factory_count = 0;
    std::uint64_t qubits_per_t_factory = 0;
    std::uint64_t t_factory_qubits = 0;
    std::uint64_t total_physical_qubits = 0;
    double per_t_error_target = 0.0;
    double per_op_error_target = 0.0;
    double t_rate = 0.0;  // T gates per second
};

std::uint64_t standard_processor_logical_qubits(int n_spin_orbitals, cost::Strategy s);

PhysicalCostReport physical_report(const cost::LogicalCostReport& logical, const FTParams& params);

}  // namespace qre::ft

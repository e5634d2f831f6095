#include "qre/fault_tolerance.hpp"

#include <cmath>
#include <numeric>

#include "qre/error.hpp"

namespace qre::ft {

void FTParams::validate() const {
    if (!(p_clifford > 0 && p_clifford < logical_model.threshold))
        throw ValidationError("p_clifford must lie in (0, threshold)");
    const double pi = injection_error();
    if (!(pi > 0 && pi < 1)) throw ValidationError("p_inject must lie in (0, 1)");
    if (!(t_phys > 0)) throw ValidationError("t_phys must be > 0");
    if (!(target_total_failure > 0 && target_total_failure < 1))
        throw ValidationError("target_total_failure must lie in (0, 1)");
    if (!(t_failure_budget > 0 && t_failure_budget < 1))
        throw ValidationError("t_failure_budget must lie in (0, 1)");
    if (!(kappa_factory > 0)) throw ValidationError("kappa_factory must be > 0");
}

FTParams standard_params(double p_clifford) {
    FTParams p;
    p.p_clifford = p_clifford;
    return p;
}

FTParams topological_params(double p_clifford, double p_inject) {
    FTParams p;
    p.p_clifford = p_clifford;
    p.p_inject = p_inject;
    return p;
}

double logical_error_rate(int d, double p, const LogicalErrorModel& m) {
    return m.prefactor * std::pow(p / m.threshold, (d + 1) / 2.0);
}

int code_distance(double target, double p, const LogicalErrorModel& m) {
    if (!(target > 0 && target < 1)) throw ValidationError("error target must lie in (0, 1)");
    if (!(p < m.threshold)) throw ValidationError("target unreachable: p >= threshold");
    if (!(p > 0)) throw ValidationError("physical error rate must be > 0");
    if (m.prefactor <= target) return 1;
    // (d+1)/2 >= log(target/a) / log(p/p_th)
    const double x = std::log(target / m.prefactor) / std::log(p / m.threshold);
    int d = 2 * static_cast<int>(std::ceil(x - 1e-12)) - 1;
    if (d < 1) d = 1;
    while (logical_error_rate(d, p, m) > target) d += 2;
    while (d > 1 && logical_error_rate(d - 2, p, m) <= target) d -= 2;
    return d;
}

int code_distance(double target, const FTParams& params) {
    return code_distance(target, params.p_clifford, params.logical_model);
}

std::uint64_t qubits_per_logical(int d) {
    if (d < 1) throw ValidationError("code distance must be >= 1");
    return static_cast<std::uint64_t>(std::ceil(12.5 * d * d));
}

std::vector<double> distillation_errors(double p_inject, int rounds) {
    std::vector<double> e{p_inject};
    for (int k = 0; k < rounds; ++k) e.push_back(35 * e.back() * e.back() * e.back());
    return e;
}

int distillation_rounds(double p_inject, double target) {
    if (!(p_inject > 0 && p_inject < 1)) throw ValidationError("p_inject must lie in (0, 1)");
    if (!(target > 0)) throw ValidationError("T error target must be > 0");
    if (p_inject <= target) return 0;
    if (!(35 * p_inject * p_inject < 1)) throw ValidationError("distillation does not converge");
    double e = p_inject;
    int rounds = 0;
    while (e > target) {
        e = 35 * e * e * e;
        ++rounds;
    }
    return rounds;
}

std::uint64_t t_factory_footprint(int rounds, std::span<const int> distances) {
    if (rounds < 0) throw ValidationError("rounds must be >= 0");
    if (rounds > 2) throw ValidationError("more than two distillation rounds is unsupported");
    if (distances.size() != static_cast<std::size_t>(std::max(rounds, 1)))
        throw ValidationError("need one code distance per round");
    const int d_first = distances.back();
    switch (rounds) {
        case 0: return qubits_per_logical(d_first);
        case 1: return 16 * qubits_per_logical(d_first);
        default: return 240 * qubits_per_logical(d_first);
    }
}

std::uint64_t t_factory_count(double t_rate, std::span<const int> distances, const FTParams& params) {
    if (!(t_rate >= 0)) throw ValidationError("t_rate must be >= 0");
    if (distances.empty()) throw ValidationError("need at least one distillation distance");
    const double mean = std::accumulate(distances.begin(), distances.end(), 0.0) /
                        static_cast<double>(distances.size());
    const double n = std::ceil(t_rate * params.kappa_factory * mean * params.t_phys);
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(n));
}

std::uint64_t standard_processor_logical_qubits(int n_spin_orbitals, cost::Strategy s) {
    const auto n = static_cast<std::uint64_t>(n_spin_orbitals);
    switch (s) {
        case cost::Strategy::serial: return n + 3;
        case cost::Strategy::par: return n + 2;
        case cost::Strategy::nesting: return n + 1;
    }
    return n;
}

PhysicalCostReport physical_report(const cost::LogicalCostReport& logical, const FTParams& params) {
    params.validate();
    if (!(logical.t_count > 0) || !(logical.wall_time > 0))
        throw ValidationError("logical report needs t_count > 0 and wall_time > 0");
    PhysicalCostReport r;
    r.strategy = logical.strategy;
    r.p_clifford = params.p_clifford;
    r.p_inject = params.injection_error();
    r.logical_report_qubits = logical.logical_qubits;
    r.processor_logical_qubits =
        params.processor_convention == ProcessorConvention::standard
            ? standard_processor_logical_qubits(logical.n_spin_orbitals, logical.strategy)
            : logical.logical_qubits;
    if (r.processor_logical_qubits == 0) throw ValidationError("processor has no logical qubits");

    r.per_op_error_target = params.target_total_failure /
                            (logical.t_count * static_cast<double>(r.processor_logical_qubits));
    r.per_t_error_target = params.t_failure_budget / logical.t_count;
    r.processor_distance = code_distance(r.per_op_error_target, params);
    r.qubits_per_logical = qubits_per_logical(r.processor_distance);
    r.processor_qubits = r.processor_logical_qubits * r.qubits_per_logical;

    r.distillation_rounds = distillation_rounds(r.p_inject, r.per_t_error_target);
    // Final round runs at the processor distance; each earlier round needs logical
    // errors small enough for the next round's input.
    r.code_distances.push_back(r.processor_distance);
    double need = r.per_t_error_target;
    for (int k = r.distillation_rounds - 1; k >= 1; --k) {
        need = std::cbrt(need / 35.0);
        int d = 3;
        while (logical_error_rate(d, params.p_clifford, params.logical_model) >
               need / (params.distillation_locations_per_distance * d))
            d += 2;
        r.code_distances.push_back(d);
    }
    r.qubits_per_t_factory = t_factory_footprint(r.distillation_rounds, r.code_distances);
    r.t_rate = logical.t_count / logical.wall_time;
    r.t_factory_count = t_factory_count(r.t_rate, r.code_distances, params);
    r.t_factory_qubits = r.t_factory_count * r.qubits_per_t_factory;

    r.rotation_factory_count = logical.rotation_factories;
    r.qubits_per_rotation_factory = r.rotation_factory_count ? r.qubits_per_logical : 0;
    r.rotation_factory_qubits = r.rotation_factory_count * r.qubits_per_rotation_factory;

    r.total_physical_qubits = r.processor_qubits + r.rotation_factory_qubits + r.t_factory_qubits;
    return r;
}

}  // namespace qre::ft

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "qre/execution.hpp"
#include "qre/terms.hpp"

namespace qre::trotter {

using hamiltonian::HamiltonianTerm;
using hamiltonian::TermClass;
using hamiltonian::TermList;

// false only when one of the vanishing rules certifies [H_a, [H_b, H_c]] = 0.
bool double_commutator_nonzero(const HamiltonianTerm& a, const HamiltonianTerm& b,
                               const HamiltonianTerm& c);

// Rules 1-4 only (no Jacobi step).
bool vanishes_directly(const HamiltonianTerm& a, const HamiltonianTerm& b,
                       const HamiltonianTerm& c);

// Term norm = |coefficient| * multiplier[class].
struct NormModel {
    std::array<double, hamiltonian::kTermClassCount> multiplier{1, 1, 1, 1, 1};

    double operator()(const HamiltonianTerm& t) const {
        return t.norm() * multiplier[static_cast<int>(t.term_class())];
    }
};

using ClassTriple = std::array<TermClass, 3>;
std::string class_triple_name(const ClassTriple& t);

struct TrotterErrorEstimate {
    double h_bound = 0.0;  // Ha^3, error <= h t^2
    std::map<ClassTriple, double> per_class_contribution;
    std::uint64_t samples_per_class = 0;
    double sample_std_error = 0.0;  // relative
    double absolute_std_error = 0.0;
    std::uint64_t rng_seed = 0;
    bool exhaustive = false;
};

// Single summand of the bound for term indices (a, b, c) in list order.
double gamma(const TermList& terms, std::size_t a, std::size_t b, std::size_t c,
             const NormModel& norm = {});

// Exact stratum-by-stratum sum over all L^3 triples.
TrotterErrorEstimate exhaustive_error_constant(const TermList& terms,
                                               Execution exec = Execution::parallel,
                                               const NormModel& norm = {});

// Stratified Monte Carlo over ordered class triples.
TrotterErrorEstimate estimate_error_constant(const TermList& terms,
                                             std::uint64_t samples_per_class,
                                             std::uint64_t seed,
                                             Execution exec = Execution::parallel,
                                             const NormModel& norm = {});

inline constexpr std::uint64_t kProductionSamplesPerClass = 100'000'000;
inline constexpr std::uint64_t kTestSamplesPerClass = 10'000;

// Exact mean and variance of gamma over uniformly drawn triples.
struct GammaMoments {
    double mean = 0.0;
    double variance = 0.0;
    std::uint64_t L = 0;
};
GammaMoments gamma_moments(const TermList& terms, const NormModel& norm = {});

// Unstratified estimator L^3 * mean(gamma) with uniform triples.
double estimate_error_constant_uniform(const TermList& terms, std::uint64_t samples,
                                       std::uint64_t seed, const NormModel& norm = {});

// ceil(L^6 variance / eps^2): samples after which the uniform estimator is within
// 2 eps of h with probability >= 3/4. Saturates at UINT64_MAX.
std::uint64_t chebyshev_samples(double variance, std::uint64_t L, double eps);

// Steps per unit time, ceil(sqrt(h / epsilon2)).
std::uint64_t trotter_number(double h, double epsilon2);

enum class TrotterCase { rigorous, pessimistic, rescaled, optimistic };
std::string_view to_string(TrotterCase c);
TrotterCase trotter_case_from_string(std::string_view s);

struct TrotterNumberModel {
    TrotterCase trotter_case = TrotterCase::rescaled;
    double beta_at_reference = 1.0;
    int reference_spin_orbitals = 2;
    double scaling_exponent = 2.5;

    void validate() const;
};

std::uint64_t trotter_number_model(const TrotterNumberModel& model, int n_spin_orbitals);

// Calibration points for the two FeMoco structures (N = 108 and N = 114).
TrotterNumberModel femoco_trotter_model(int structure, TrotterCase c);

// ceil that ignores relative rounding noise below 1e-12.
std::uint64_t tolerant_ceil(double x);

}  // namespace qre::trotter

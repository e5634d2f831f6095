#pragma once

#include <cstdint>

#include "qre/execution.hpp"
#include "qre/terms.hpp"

namespace qre::parallel {

struct ParParams {
    std::uint64_t n_levels = 1;          // cached failure depth n
    std::uint64_t rotations_cached = 1;  // rotations served by one cache (not the Hamiltonian M)
    std::uint64_t synthesis_cost = 0;    // C, T gates per deterministic rotation

    void validate() const;
};

// 2^n (1 - (1 - 2^-n)^M) = E[min(Geometric(2^-n), M)].
double par_expected_rotations(const ParParams& p);

// Mean T-gate periods per rotation: (2 - (n+2)/2^n) + (C+n)/2^n.
double par_factory_time_per_rotation(const ParParams& p);

// Variant without feed-forward: C / 2^n.
double par_factory_time_no_feed_forward(const ParParams& p);

// Staggered factories n (C + n); the text's cruder n C reading is below.
std::uint64_t par_rotation_factories(const ParParams& p);
std::uint64_t par_rotation_factories_nc(const ParParams& p);

struct MonteCarloStats {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
};

// Direct simulation with fair coin flips per attempt.
MonteCarloStats simulate_par_rotations(const ParParams& p, std::uint64_t trials,
                                       std::uint64_t seed, Execution exec = Execution::parallel);
MonteCarloStats simulate_par_factory_time(const ParParams& p, std::uint64_t trials,
                                          std::uint64_t seed, Execution exec = Execution::parallel);

// Greedy packing of consecutive terms into batches with pairwise-disjoint support;
// mean batch size. Order is never changed.
double nesting_parallelism(const hamiltonian::TermList& terms);

}  // namespace qre::parallel

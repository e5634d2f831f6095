#pragma once

#include <cstdint>
#include <vector>

#include "qre/pauli.hpp"
#include "qre/terms.hpp"

namespace qre::hamiltonian {

// Per-string circuit model: basis change on every X/Y letter (H or V), a CNOT
// ladder along the sorted support, one Rz, then the mirror image.
struct CliffordCostTable {
    int entangling_per_link = 2;        // compute + uncompute CNOT per neighbouring pair
    int basis_change_per_letter = 2;    // per X or Y letter; Z letters need none
    bool adjacent_cancellation = true;  // cancel across neighbouring strings
};

struct CliffordStepCount {
    std::uint64_t entangling = 0;
    std::uint64_t basis_changes = 0;
    std::uint64_t rotations = 0;  // non-Clifford, reported for reference only

    std::uint64_t total() const { return entangling + basis_changes; }
};

// Strings of one second-order step: the forward sweep then the full reverse.
std::vector<PauliString> trotter_step_strings(const TermList& terms);

CliffordStepCount clifford_step_breakdown(const TermList& terms,
                                          const CliffordCostTable& table = {});

// Total Clifford gates for one second-order Trotter step.
std::uint64_t clifford_count_per_step(const TermList& terms, const CliffordCostTable& table = {});

}  // namespace qre::hamiltonian

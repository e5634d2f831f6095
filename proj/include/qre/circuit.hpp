#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qre/pauli.hpp"
#include "qre/terms.hpp"

namespace qre::oracle {

enum class GateKind : std::uint8_t { H, V, Vdg, CNOT, Rz };

struct Gate {
    GateKind kind;
    int q0;
    int q1 = -1;  // CNOT target

    friend bool operator==(const Gate&, const Gate&) = default;
};

struct GateCount {
    std::uint64_t cnot = 0;
    std::uint64_t single_clifford = 0;
    std::uint64_t rotations = 0;

    std::uint64_t clifford() const { return cnot + single_clifford; }
};

// exp(-i theta P) as basis change, CNOT ladder, Rz, mirror.
std::vector<Gate> string_circuit(const hamiltonian::PauliString& s);

GateCount count_gates(std::span<const Gate> gates);

// Removes adjacent inverse pairs, where gates on disjoint wires commute, until
// nothing more cancels. Rz gates are treated as opaque.
std::vector<Gate> cancel_inverses(std::span<const Gate> gates);

// Explicit construction of one Trotter step: every string's circuit is built and
// the cancelling pass runs on each window (tail of one string, head of the next).
GateCount step_circuit_count(const hamiltonian::TermList& terms);

// Same circuit with a single cancelling pass over the whole step.
GateCount step_circuit_count_global(const hamiltonian::TermList& terms);

}  // namespace qre::oracle

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qre/terms.hpp"

namespace qre::hamiltonian {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

struct PauliString {
    // Non-identity letters, ascending qubit.
    std::vector<std::pair<int, Pauli>> letters;
    double coefficient = 0.0;

    std::size_t weight() const { return letters.size(); }
};

// Jordan-Wigner image of a term with qubit j = spin orbital j. The identity
// component is dropped; strings come out in a canonical (lexicographic) order.
std::vector<PauliString> jordan_wigner(const HamiltonianTerm& term);

}  // namespace qre::hamiltonian

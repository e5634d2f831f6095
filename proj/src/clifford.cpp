#include "qre/clifford.hpp"

#include <algorithm>

#include "qre/error.hpp"

namespace qre::hamiltonian {

std::vector<PauliString> trotter_step_strings(const TermList& terms) {
    std::vector<PauliString> forward;
    for (const auto& t : terms.terms) {
        auto s = jordan_wigner(t);
        forward.insert(forward.end(), s.begin(), s.end());
    }
    std::vector<PauliString> step = forward;
    step.insert(step.end(), forward.rbegin(), forward.rend());
    return step;
}

namespace {

std::uint64_t non_z(const PauliString& s) {
    return static_cast<std::uint64_t>(std::count_if(
        s.letters.begin(), s.letters.end(), [](const auto& l) { return l.second != Pauli::Z; }));
}

// Gates removed at the boundary between consecutive strings a then b.
void boundary_savings(const PauliString& a, const PauliString& b, std::uint64_t& links,
                      std::uint64_t& letters) {
    // Basis gates meet on every shared qubit; equal X/Y letters cancel.
    std::size_t i = 0, j = 0;
    while (i < a.letters.size() && j < b.letters.size()) {
        if (a.letters[i].first < b.letters[j].first) {
            ++i;
        } else if (b.letters[j].first < a.letters[i].first) {
            ++j;
        } else {
            if (a.letters[i].second == b.letters[j].second && a.letters[i].second != Pauli::Z)
                ++letters;
            ++i;
            ++j;
        }
    }
    // Ladder CNOTs cancel pairwise along a common (qubit, letter) prefix.
    std::size_t k = 0;
    while (k < a.letters.size() && k < b.letters.size() && a.letters[k] == b.letters[k]) ++k;
    if (k >= 2) links += k - 1;
}

}  // namespace

CliffordStepCount clifford_step_breakdown(const TermList& terms, const CliffordCostTable& table) {
    if (terms.terms.empty()) throw ValidationError("clifford count needs a nonempty term list");
    const auto strings = trotter_step_strings(terms);
    CliffordStepCount out;
    for (const auto& s : strings) {
        out.entangling += static_cast<std::uint64_t>(table.entangling_per_link) * (s.weight() - 1);
        out.basis_changes += static_cast<std::uint64_t>(table.basis_change_per_letter) * non_z(s);
        ++out.rotations;
    }
    if (table.adjacent_cancellation) {
        std::uint64_t links = 0, letters = 0;
        for (std::size_t k = 0; k + 1 < strings.size(); ++k)
            boundary_savings(strings[k], strings[k + 1], links, letters);
        out.entangling -= static_cast<std::uint64_t>(table.entangling_per_link) * links;
        out.basis_changes -= static_cast<std::uint64_t>(table.basis_change_per_letter) * letters;
    }
    return out;
}

std::uint64_t clifford_count_per_step(const TermList& terms, const CliffordCostTable& table) {
    return clifford_step_breakdown(terms, table).total();
}

}  // namespace qre::hamiltonian

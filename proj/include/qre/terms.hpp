#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qre/integrals.hpp"

namespace qre::hamiltonian {

enum class TermClass : std::uint8_t { PP, PQ, PQQP, PQQR, PQRS };
inline constexpr int kTermClassCount = 5;

std::string_view to_string(TermClass c);
TermClass term_class_from_string(std::string_view s);

// One Hermitian term, 0-based spin-orbital indices (spatial p -> 2p up, 2p+1 down).
//
// Operator slots:
//   PP    [p, p]        c n_p
//   PQ    [p, q], p<q   c (a+_p a_q + a+_q a_p)
//   PQQP  [a, b, a, b]  c n_a n_b
//   PQQR, PQRS [a, b, c, d], a<b, c<d, (a,b)<(c,d):  c (E + E+), E = a+_a a+_b a_c a_d
class HamiltonianTerm {
public:
    HamiltonianTerm() = default;
    HamiltonianTerm(TermClass cls, std::span<const int> ops, double coefficient);

    TermClass term_class() const { return cls_; }
    double coefficient() const { return coefficient_; }
    double norm() const { return coefficient_ < 0 ? -coefficient_ : coefficient_; }

    std::span<const int> operator_indices() const { return {ops_.data(), arity_}; }
    // Sorted distinct spin orbitals.
    std::span<const int> support() const { return {support_.data(), support_size_}; }

    bool is_diagonal() const { return cls_ == TermClass::PP || cls_ == TermClass::PQQP; }
    // A term and its adjoint counted separately (self-adjoint terms count once).
    int unmerged_multiplicity() const { return is_diagonal() ? 1 : 2; }

    // Lexicographic order on the operator-slot tuple.
    friend bool operator<(const HamiltonianTerm& a, const HamiltonianTerm& b);
    friend bool operator==(const HamiltonianTerm& a, const HamiltonianTerm& b);

private:
    TermClass cls_ = TermClass::PP;
    std::uint8_t arity_ = 0;
    std::uint8_t support_size_ = 0;
    std::array<int, 4> ops_{};
    std::array<int, 4> support_{};
    double coefficient_ = 0.0;
};

TermClass classify(std::span<const int> ops);

struct TermList {
    std::vector<HamiltonianTerm> terms;
    int n_spin_orbitals = 0;
    int n_electrons = -1;   // -1 when unknown
    double constant = 0.0;  // nuclear repulsion, carried through for absolute energies

    std::size_t M() const { return terms.size(); }
    std::size_t unmerged_count() const;
    std::array<std::size_t, kTermClassCount> class_counts() const;
};

inline constexpr double kDefaultDropThreshold = 1e-10;

TermList enumerate_terms(const IntegralTable& integrals,
                         double drop_threshold = kDefaultDropThreshold);

// Line-oriented "class indices coefficient" text.
void write_term_list(std::ostream& out, const TermList& terms);
TermList read_term_list(std::istream& in);

}  // namespace qre::hamiltonian

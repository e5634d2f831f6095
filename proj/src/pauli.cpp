#include "qre/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>

namespace qre::hamiltonian {

namespace {

using cd = std::complex<double>;
using Letters = std::vector<std::uint8_t>;

struct Sum {
    std::map<Letters, cd> terms;
};

// phase of sigma_a sigma_b for non-identity, distinct a, b
cd product_phase(std::uint8_t a, std::uint8_t b) {
    if (a == 0 || b == 0 || a == b) return 1.0;
    const bool cyclic = (a == 1 && b == 2) || (a == 2 && b == 3) || (a == 3 && b == 1);
    return cyclic ? cd(0, 1) : cd(0, -1);
}

Sum multiply(const Sum& x, const Sum& y) {
    Sum out;
    for (const auto& [lx, wx] : x.terms)
        for (const auto& [ly, wy] : y.terms) {
            Letters l(lx.size());
            cd w = wx * wy;
            for (std::size_t q = 0; q < lx.size(); ++q) {
                w *= product_phase(lx[q], ly[q]);
                l[q] = lx[q] ^ ly[q];
            }
            out.terms[l] += w;
        }
    return out;
}

// creation: Z..Z (X - iY)/2, annihilation: Z..Z (X + iY)/2
Sum ladder(int j, bool creation, std::size_t width) {
    Letters base(width, 0);
    for (int q = 0; q < j; ++q) base[static_cast<std::size_t>(q)] = 3;
    Letters lx = base, ly = base;
    lx[static_cast<std::size_t>(j)] = 1;
    ly[static_cast<std::size_t>(j)] = 2;
    Sum s;
    s.terms[lx] = 0.5;
    s.terms[ly] = creation ? cd(0, -0.5) : cd(0, 0.5);
    return s;
}

}  // namespace

std::vector<PauliString> jordan_wigner(const HamiltonianTerm& term) {
    auto ops = term.operator_indices();
    const std::size_t width = static_cast<std::size_t>(*std::max_element(ops.begin(), ops.end())) + 1;

    // Monomial E with creation operators in the first half of the slots.
    Sum e;
    e.terms[Letters(width, 0)] = 1.0;
    const std::size_t half = ops.size() / 2;
    for (std::size_t k = 0; k < ops.size(); ++k) e = multiply(e, ladder(ops[k], k < half, width));

    const bool self_adjoint = term.is_diagonal();
    const double sign = term.term_class() == TermClass::PQQP ? -1.0 : 1.0;  // E = -n_a n_b

    std::vector<PauliString> out;
    for (const auto& [l, w] : e.terms) {
        if (std::all_of(l.begin(), l.end(), [](std::uint8_t v) { return v == 0; })) continue;
        // E + E^dagger keeps twice the real part; a self-adjoint E is already real.
        const double re = self_adjoint ? w.real() : 2.0 * w.real();
        if (std::abs(re) < 1e-14) continue;
        PauliString p;
        for (std::size_t q = 0; q < l.size(); ++q)
            if (l[q] != 0) p.letters.emplace_back(static_cast<int>(q), static_cast<Pauli>(l[q]));
        p.coefficient = sign * re * term.coefficient();
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace qre::hamiltonian

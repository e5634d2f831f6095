#include "qre/terms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "qre/error.hpp"

namespace qre::hamiltonian {

std::string_view to_string(TermClass c) {
    switch (c) {
        case TermClass::PP: return "PP";
        case TermClass::PQ: return "PQ";
        case TermClass::PQQP: return "PQQP";
        case TermClass::PQQR: return "PQQR";
        case TermClass::PQRS: return "PQRS";
    }
    return "?";
}

TermClass term_class_from_string(std::string_view s) {
    for (int i = 0; i < kTermClassCount; ++i) {
        auto c = static_cast<TermClass>(i);
        if (to_string(c) == s) return c;
    }
    throw ValidationError("unknown term class '" + std::string(s) + "'");
}

TermClass classify(std::span<const int> ops) {
    std::array<int, 4> s{};
    std::copy(ops.begin(), ops.end(), s.begin());
    std::sort(s.begin(), s.begin() + ops.size());
    auto distinct = std::unique(s.begin(), s.begin() + ops.size()) - s.begin();
    if (ops.size() == 2) return distinct == 1 ? TermClass::PP : TermClass::PQ;
    switch (distinct) {
        case 2: return TermClass::PQQP;
        case 3: return TermClass::PQQR;
        default: return TermClass::PQRS;
    }
}

HamiltonianTerm::HamiltonianTerm(TermClass cls, std::span<const int> ops, double coefficient)
    : cls_(cls), arity_(static_cast<std::uint8_t>(ops.size())), coefficient_(coefficient) {
    if (ops.size() != 2 && ops.size() != 4)
        throw ValidationError("term needs 2 or 4 operator indices");
    for (int i : ops)
        if (i < 0) throw ValidationError("negative spin-orbital index");
    std::copy(ops.begin(), ops.end(), ops_.begin());
    if (classify(ops) != cls)
        throw ValidationError("class " + std::string(to_string(cls)) +
                              " inconsistent with indices");
    if (ops.size() == 2 && ops[0] > ops[1])
        throw ValidationError("one-body term indices must be ordered");
    if (ops.size() == 4) {
        std::array<int, 2> ab{ops[0], ops[1]}, cd{ops[2], ops[3]};
        if (ops[0] >= ops[1] || ops[2] >= ops[3] || cd < ab)
            throw ValidationError("two-body term indices not in canonical form");
        if (cls == TermClass::PQQP && ab != cd)
            throw ValidationError("PQQP term must read [a, b, a, b]");
    }
    support_ = ops_;
    std::sort(support_.begin(), support_.begin() + arity_);
    support_size_ =
        static_cast<std::uint8_t>(std::unique(support_.begin(), support_.begin() + arity_) -
                                  support_.begin());
}

bool operator<(const HamiltonianTerm& a, const HamiltonianTerm& b) {
    auto x = a.operator_indices();
    auto y = b.operator_indices();
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

bool operator==(const HamiltonianTerm& a, const HamiltonianTerm& b) {
    auto x = a.operator_indices();
    auto y = b.operator_indices();
    return a.cls_ == b.cls_ && a.coefficient_ == b.coefficient_ &&
           std::equal(x.begin(), x.end(), y.begin(), y.end());
}

std::size_t TermList::unmerged_count() const {
    std::size_t n = 0;
    for (const auto& t : terms) n += static_cast<std::size_t>(t.unmerged_multiplicity());
    return n;
}

std::array<std::size_t, kTermClassCount> TermList::class_counts() const {
    std::array<std::size_t, kTermClassCount> c{};
    for (const auto& t : terms) ++c[static_cast<int>(t.term_class())];
    return c;
}

TermList enumerate_terms(const IntegralTable& integrals, double drop_threshold) {
    if (drop_threshold < 0) throw ValidationError("drop_threshold must be >= 0");
    const int n = integrals.n_spatial;
    const int N = 2 * n;
    const auto h1 = integrals.dense_one_body();
    const auto h2 = integrals.dense_two_body();
    const auto un = static_cast<std::size_t>(n);
    auto chem = [&](int p, int q, int r, int s) {
        return h2[((p * un + q) * un + r) * un + s];
    };
    // Physicist coefficient of a+_A a+_B a_C a_D in (1/2) sum h_ABCD: (AD|BC) with spin match.
    auto phys = [&](int A, int B, int C, int D) {
        if ((A & 1) != (D & 1) || (B & 1) != (C & 1)) return 0.0;
        return chem(A >> 1, D >> 1, B >> 1, C >> 1);
    };

    TermList out;
    out.n_spin_orbitals = N;
    out.n_electrons = integrals.n_electrons;
    out.constant = integrals.nuclear_repulsion;
    auto keep = [&](double c) { return !(std::abs(c) <= drop_threshold); };

    for (int p = 0; p < N; ++p)
        for (int q = p; q < N; q += 2) {
            // q - p even keeps spins equal
            double c = h1[(p >> 1) * un + (q >> 1)];
            if (!keep(c)) continue;
            std::array<int, 2> ops{p, q};
            out.terms.emplace_back(p == q ? TermClass::PP : TermClass::PQ, ops, c);
        }

    for (int A = 0; A < N; ++A)
        for (int B = A + 1; B < N; ++B)
            for (int C = A; C < N; ++C)
                for (int D = C + 1; D < N; ++D) {
                    if (C == A && D < B) continue;
                    // total Sz conserved
                    if ((A & 1) + (B & 1) != (C & 1) + (D & 1)) continue;
                    const double g = phys(A, B, C, D) - phys(A, B, D, C);
                    std::array<int, 4> ops{A, B, C, D};
                    double coef = g;
                    if (A == C && B == D) coef = -g;  // E = -n_A n_B
                    if (!keep(coef)) continue;
                    out.terms.emplace_back(classify(ops), ops, coef);
                }

    std::sort(out.terms.begin(), out.terms.end());
    return out;
}

void write_term_list(std::ostream& out, const TermList& terms) {
    out << "# n_spin_orbitals " << terms.n_spin_orbitals << '\n';
    out << "# n_electrons " << terms.n_electrons << '\n';
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", terms.constant);
    out << "# constant " << buf << '\n';
    for (const auto& t : terms.terms) {
        out << to_string(t.term_class());
        for (int i : t.operator_indices()) out << ' ' << i;
        std::snprintf(buf, sizeof buf, "%.17g", t.coefficient());
        out << ' ' << buf << '\n';
    }
}

TermList read_term_list(std::istream& in) {
    TermList out;
    std::string line;
    std::size_t lineno = 0;
    int max_index = -1;
    bool have_n = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::string head;
        if (!(ss >> head)) continue;
        if (head == "#") {
            std::string key;
            ss >> key;
            if (key == "n_spin_orbitals") {
                if (!(ss >> out.n_spin_orbitals)) throw ParseError(lineno, "bad n_spin_orbitals");
                have_n = true;
            } else if (key == "n_electrons") {
                if (!(ss >> out.n_electrons)) throw ParseError(lineno, "bad n_electrons");
            } else if (key == "constant") {
                if (!(ss >> out.constant)) throw ParseError(lineno, "bad constant");
            }
            continue;
        }
        TermClass cls;
        try {
            cls = term_class_from_string(head);
        } catch (const ValidationError& e) {
            throw ParseError(lineno, e.what());
        }
        const std::size_t arity = (cls == TermClass::PP || cls == TermClass::PQ) ? 2 : 4;
        std::array<int, 4> ops{};
        for (std::size_t k = 0; k < arity; ++k)
            if (!(ss >> ops[k])) throw ParseError(lineno, "missing index");
        double c;
        if (!(ss >> c)) throw ParseError(lineno, "missing coefficient");
        try {
            out.terms.emplace_back(cls, std::span<const int>(ops.data(), arity), c);
        } catch (const ValidationError& e) {
            throw ParseError(lineno, e.what());
        }
        for (std::size_t k = 0; k < arity; ++k) max_index = std::max(max_index, ops[k]);
    }
    if (!have_n) out.n_spin_orbitals = max_index + 1;
    if (max_index >= out.n_spin_orbitals)
        throw ValidationError("term index exceeds n_spin_orbitals");
    return out;
}

}  // namespace qre::hamiltonian

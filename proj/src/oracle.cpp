#include "qre/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "qre/error.hpp"

namespace qre::oracle {

using hamiltonian::TermClass;

FockBasis FockBasis::full(int n) {
    if (n < 0 || n > 30) throw ValidationError("full Fock basis needs 0 <= n <= 30");
    FockBasis b;
    b.n_ = n;
    b.states_.resize(std::size_t{1} << n);
    for (std::size_t i = 0; i < b.states_.size(); ++i) b.states_[i] = i;
    return b;
}

FockBasis FockBasis::sector(int n, const Sector& s) {
    if (n < 0 || n > 30) throw ValidationError("Fock basis needs 0 <= n <= 30");
    if (s.n_electrons < 0 || s.n_electrons > n) throw ValidationError("electron count out of range");
    constexpr std::uint64_t even = 0x5555555555555555ULL;
    FockBasis b;
    b.n_ = n;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        if (std::popcount(x) != s.n_electrons) continue;
        if (s.n_up && std::popcount(x & even) != *s.n_up) continue;
        b.states_.push_back(x);
    }
    return b;
}

std::optional<std::size_t> FockBasis::index(std::uint64_t det) const {
    auto it = std::lower_bound(states_.begin(), states_.end(), det);
    if (it == states_.end() || *it != det) return std::nullopt;
    return static_cast<std::size_t>(it - states_.begin());
}

namespace {

// Applies a ladder operator in place; false when it annihilates the state.
bool apply_ladder(std::uint64_t& x, int j, bool creation, int& sign) {
    const std::uint64_t bit = std::uint64_t{1} << j;
    if (creation == ((x & bit) != 0)) return false;
    if (std::popcount(x & (bit - 1)) & 1) sign = -sign;
    x ^= bit;
    return true;
}

}  // namespace

TermAction term_action(const HamiltonianTerm& term, const FockBasis& basis) {
    TermAction out;
    const double c = term.coefficient();
    auto ops = term.operator_indices();
    const auto bit = [](int j) { return std::uint64_t{1} << j; };
    if (term.term_class() == TermClass::PP || term.term_class() == TermClass::PQQP) {
        std::uint64_t mask = 0;
        for (int j : ops) mask |= bit(j);
        for (std::size_t i = 0; i < basis.size(); ++i)
            if ((basis.state(i) & mask) == mask) out.diagonal.emplace_back(i, c);
        return out;
    }
    const std::size_t half = ops.size() / 2;
    for (std::size_t j = 0; j < basis.size(); ++j) {
        std::uint64_t x = basis.state(j);
        int sign = 1;
        bool ok = true;
        for (std::size_t k = ops.size(); k-- > 0 && ok;) ok = apply_ladder(x, ops[k], k < half, sign);
        if (!ok) continue;
        auto i = basis.index(x);
        if (!i) throw ValidationError("term leaves the particle sector");
        out.pairs.emplace_back(*i, j, c * sign);
    }
    return out;
}

FockMatrixHamiltonian build_matrix(const TermList& terms, std::optional<Sector> sector,
                                   const OracleOptions& options) {
    if (terms.n_spin_orbitals > options.max_spin_orbitals)
        throw ValidationError("oracle cap exceeded: " + std::to_string(terms.n_spin_orbitals) +
                              " spin orbitals > " + std::to_string(options.max_spin_orbitals));
    FockMatrixHamiltonian h;
    h.n_spin_orbitals = terms.n_spin_orbitals;
    h.particle_sector = sector;
    h.basis = sector ? FockBasis::sector(terms.n_spin_orbitals, *sector)
                     : FockBasis::full(terms.n_spin_orbitals);
    const auto d = static_cast<Eigen::Index>(h.basis.size());
    h.matrix = Eigen::MatrixXd::Zero(d, d);
    for (const auto& t : terms.terms) {
        auto a = term_action(t, h.basis);
        for (const auto& [i, v] : a.diagonal) h.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += v;
        for (const auto& [i, j, v] : a.pairs) {
            h.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += v;
            h.matrix(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) += v;
        }
    }
    return h;
}

GroundState ground_state(const FockMatrixHamiltonian& h, double tol) {
    if (h.dimension() == 0) throw ValidationError("empty Fock space");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix);
    if (es.info() != Eigen::Success) throw std::runtime_error("diagonalization failed");
    const auto& w = es.eigenvalues();
    GroundState g;
    g.energy = w(0);
    Eigen::Index k = 1;
    while (k < w.size() && w(k) - w(0) <= tol) ++k;
    g.degeneracy = static_cast<int>(k);
    g.subspace = es.eigenvectors().leftCols(k);
    return g;
}

Sector hartree_fock_sector(int n_electrons) {
    if (n_electrons < 0) throw ValidationError("electron count unknown");
    return Sector{n_electrons, (n_electrons + 1) / 2};
}

namespace {

using Complex = std::complex<double>;
using RowMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// U <- exp(-i theta H_term) U, exact for a term whose monomial squares to zero.
void apply_exponential(RowMatrix& U, const TermAction& a, double theta) {
    const Eigen::Index d = U.cols();
    for (const auto& [i, v] : a.diagonal)
        U.row(static_cast<Eigen::Index>(i)) *= std::polar(1.0, -v * theta);
    for (const auto& [i, j, v] : a.pairs) {
        const double c = std::cos(v * theta);
        const Complex s(0.0, -std::sin(v * theta));
        Complex* ri = U.row(static_cast<Eigen::Index>(i)).data();
        Complex* rj = U.row(static_cast<Eigen::Index>(j)).data();
        for (Eigen::Index k = 0; k < d; ++k) {
            const Complex x = ri[k], y = rj[k];
            ri[k] = c * x + s * y;
            rj[k] = s * x + c * y;
        }
    }
}

Eigen::VectorXd apply_action(const TermAction& a, const Eigen::VectorXd& v) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
    for (const auto& [i, c] : a.diagonal) out(static_cast<Eigen::Index>(i)) += c * v(static_cast<Eigen::Index>(i));
    for (const auto& [i, j, c] : a.pairs) {
        out(static_cast<Eigen::Index>(i)) += c * v(static_cast<Eigen::Index>(j));
        out(static_cast<Eigen::Index>(j)) += c * v(static_cast<Eigen::Index>(i));
    }
    return out;
}

void add_action(Eigen::MatrixXd& m, const TermAction& a) {
    for (const auto& [i, c] : a.diagonal) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += c;
    for (const auto& [i, j, c] : a.pairs) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += c;
        m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) += c;
    }
}

}  // namespace

StrangOracle::StrangOracle(const TermList& terms, const Sector& sector, const OracleOptions& options)
    : h_(build_matrix(terms, sector, options)),
      ground_(ground_state(h_, options.degeneracy_tolerance)),
      constant_(terms.constant) {
    actions_.reserve(terms.terms.size());
    for (const auto& t : terms.terms) actions_.push_back(term_action(t, h_.basis));
}

TrotterExactReport StrangOracle::at(double t) const {
    if (!(t > 0)) throw ValidationError("t must be positive");
    const auto d = static_cast<Eigen::Index>(h_.dimension());
    RowMatrix U = RowMatrix::Identity(d, d);
    const double theta = t / 2;
    for (const auto& a : actions_) apply_exponential(U, a, theta);
    for (auto it = actions_.rbegin(); it != actions_.rend(); ++it) apply_exponential(U, *it, theta);

    TrotterExactReport r;
    r.t = t;
    r.steps_per_unit_time = static_cast<std::uint64_t>(std::ceil(1.0 / t));
    r.unitarity_error =
        (U.adjoint() * U - RowMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    const Eigen::MatrixXcd Ucol = U;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Ucol);
    if (es.info() != Eigen::Success) throw std::runtime_error("unitary diagonalization failed");
    const Eigen::MatrixXcd P = ground_.subspace.cast<Complex>();
    Eigen::Index best = 0;
    double best_w = -1.0;
    for (Eigen::Index k = 0; k < d; ++k) {
        const double w = (P.adjoint() * es.eigenvectors().col(k)).squaredNorm() /
                         es.eigenvectors().col(k).squaredNorm();
        if (w > best_w) {
            best_w = w;
            best = k;
        }
    }
    const double e_ref = ground_.energy;
    const Complex lambda = es.eigenvalues()(best);
    const double phi = std::arg(lambda * std::polar(1.0, e_ref * t));
    r.overlap = best_w;
    r.e_fci = e_ref + constant_;
    r.e_effective = e_ref - phi / t + constant_;
    r.delta_e = std::abs(phi) / t;
    r.phase_wrapped = std::abs(e_ref) * t >= std::numbers::pi;
    return r;
}

double StrangOracle::leading_error_coefficient() const {
    if (ground_.degeneracy != 1)
        throw ValidationError("leading error coefficient needs a nondegenerate ground state");
    const Eigen::VectorXd g = ground_.subspace.col(0);
    const auto d = static_cast<Eigen::Index>(h_.dimension());
    // R accumulates the terms after k in product order.
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(d, d);
    double total = 0.0;
    for (std::size_t k = actions_.size(); k-- > 0;) {
        const auto& Hk = actions_[k];
        const Eigen::VectorXd hg = apply_action(Hk, g);
        const Eigen::VectorXd rg = R * g;
        // <[X,[X,Y]]> = 2 (Xg).(X Y g) - 2 (Xg).(Y X g) for real symmetric X, Y
        const double hhr = 2.0 * hg.dot(apply_action(Hk, rg)) - 2.0 * hg.dot(R * hg);
        const double rrh = 2.0 * rg.dot(R * hg) - 2.0 * rg.dot(apply_action(Hk, rg));
        total += hhr / 24.0 - rrh / 12.0;
        add_action(R, Hk);
    }
    return total;
}

std::uint64_t StrangOracle::empirical_trotter_number(double target, std::uint64_t r_max) const {
    if (!(target > 0)) throw ValidationError("target error must be positive");
    auto ok = [&](std::uint64_t r) { return at(1.0 / static_cast<double>(r)).delta_e <= target; };
    std::uint64_t hi = 1;
    while (!ok(hi)) {
        if (hi >= r_max) throw ValidationError("target not reached below r_max");
        hi *= 2;
    }
    std::uint64_t lo = hi / 2;  // fails, or 0
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

TrotterExactReport strang_effective_energy(const TermList& terms, double t,
                                           std::optional<Sector> sector,
                                           const OracleOptions& options) {
    const Sector s = sector ? *sector : hartree_fock_sector(terms.n_electrons);
    return StrangOracle(terms, s, options).at(t);
}

HartreeFockOverlap hartree_fock_overlap(const TermList& terms, int n_electrons,
                                        const OracleOptions& options) {
    const Sector s = hartree_fock_sector(n_electrons);
    const auto h = build_matrix(terms, s, options);
    const auto g = ground_state(h, options.degeneracy_tolerance);
    const std::uint64_t hf = (std::uint64_t{1} << n_electrons) - 1;
    const auto idx = h.basis.index(hf);
    if (!idx) throw ValidationError("Hartree-Fock determinant outside the sector");
    HartreeFockOverlap out;
    out.overlap = g.subspace.row(static_cast<Eigen::Index>(*idx)).squaredNorm();
    out.degeneracy = g.degeneracy;
    out.degenerate = g.degeneracy > 1;
    return out;
}

}  // namespace qre::oracle

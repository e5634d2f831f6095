#pragma once

#include <cstdint>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qre/terms.hpp"

namespace qre::oracle {

using hamiltonian::HamiltonianTerm;
using hamiltonian::TermList;

// Electron-number sector, optionally with a fixed number of up-spin electrons.
struct Sector {
    int n_electrons = 0;
    std::optional<int> n_up;
};

// Occupation-number states as bitmasks (bit j = spin orbital j), sorted ascending.
class FockBasis {
public:
    static FockBasis full(int n_spin_orbitals);
    static FockBasis sector(int n_spin_orbitals, const Sector& s);

    std::size_t size() const { return states_.size(); }
    std::uint64_t state(std::size_t i) const { return states_[i]; }
    std::optional<std::size_t> index(std::uint64_t det) const;
    int n_spin_orbitals() const { return n_; }

private:
    int n_ = 0;
    std::vector<std::uint64_t> states_;
};

struct OracleOptions {
    int max_spin_orbitals = 14;
    double degeneracy_tolerance = 1e-10;
};

// Matrix of a term in a basis: diagonal entries plus symmetric (i, j, value)
// pairs. Every state appears in at most one pair since E^2 = 0 for each term.
struct TermAction {
    std::vector<std::pair<std::size_t, double>> diagonal;
    std::vector<std::tuple<std::size_t, std::size_t, double>> pairs;
};

TermAction term_action(const HamiltonianTerm& term, const FockBasis& basis);

// Matrix energies exclude the constant (nuclear repulsion) carried by the term list.
struct FockMatrixHamiltonian {
    int n_spin_orbitals = 0;
    FockBasis basis;
    Eigen::MatrixXd matrix;
    std::optional<Sector> particle_sector;

    std::size_t dimension() const { return basis.size(); }
};

FockMatrixHamiltonian build_matrix(const TermList& terms, std::optional<Sector> sector = {},
                                   const OracleOptions& options = {});

struct GroundState {
    double energy = 0.0;      // lowest matrix eigenvalue
    Eigen::MatrixXd subspace;  // orthonormal columns spanning the lowest level
    int degeneracy = 1;
};

GroundState ground_state(const FockMatrixHamiltonian& h, double degeneracy_tolerance = 1e-10);

// Sector holding the lowest-orbital determinant for the term list's electron count.
Sector hartree_fock_sector(int n_electrons);

struct TrotterExactReport {
    double t = 0.0;
    double e_fci = 0.0;        // includes the constant
    double e_effective = 0.0;  // includes the constant
    double delta_e = 0.0;
    std::uint64_t steps_per_unit_time = 0;  // ceil(1/t)
    double overlap = 0.0;                  // chosen eigenvector's weight on the FCI level
    double unitarity_error = 0.0;          // max-norm of U^dagger U - I
    bool phase_wrapped = false;            // |E t| >= pi; energy unwrapped about E_FCI
};

// Exact second-order product formula in a fixed sector. Reusable across t.
class StrangOracle {
public:
    StrangOracle(const TermList& terms, const Sector& sector, const OracleOptions& options = {});

    TrotterExactReport at(double t) const;

    // Ground-level expectation of the leading error operator, so that
    // E_eff - E_FCI = t^2 * this + O(t^4).
    double leading_error_coefficient() const;

    // Smallest integer r with delta_E(1/r) <= target (bracketing then bisection).
    std::uint64_t empirical_trotter_number(double target, std::uint64_t r_max = 1u << 20) const;

    const FockMatrixHamiltonian& hamiltonian() const { return h_; }
    const GroundState& ground() const { return ground_; }
    double constant() const { return constant_; }

private:
    FockMatrixHamiltonian h_;
    GroundState ground_;
    std::vector<TermAction> actions_;
    double constant_ = 0.0;
};

TrotterExactReport strang_effective_energy(const TermList& terms, double t,
                                           std::optional<Sector> sector = {},
                                           const OracleOptions& options = {});

struct HartreeFockOverlap {
    double overlap = 0.0;
    bool degenerate = false;
    int degeneracy = 1;
};

HartreeFockOverlap hartree_fock_overlap(const TermList& terms, int n_electrons,
                                        const OracleOptions& options = {});

}  // namespace qre::oracle

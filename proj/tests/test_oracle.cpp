#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include <json.hpp>

#include "qre/error.hpp"
#include "qre/oracle.hpp"
#include "qre/trotter_bound.hpp"
#include "test_support.hpp"

namespace qre {
namespace {

using hamiltonian::classify;
using hamiltonian::HamiltonianTerm;
using hamiltonian::TermList;
using namespace oracle;

nlohmann::json references() {
    std::ifstream in(testing::data_path("molecules/references.json"));
    return nlohmann::json::parse(in);
}

HamiltonianTerm make(std::vector<int> ops, double c) { return HamiltonianTerm(classify(ops), ops, c); }

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g;
    for (int k = 0; k < n; ++k) g.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1)));
    return g;
}

Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& m) {
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues();
}

StrangOracle oracle_for(const TermList& t) { return StrangOracle(t, hartree_fock_sector(t.n_electrons)); }

TEST(FockBasis, SizesAndIndex) {
    EXPECT_EQ(FockBasis::full(6).size(), 64u);
    EXPECT_EQ(FockBasis::sector(6, {3, {}}).size(), 20u);
    EXPECT_EQ(FockBasis::sector(6, {3, 2}).size(), 9u);  // C(3,2) * C(3,1)
    const auto b = FockBasis::sector(8, {4, {}});
    for (std::size_t i = 0; i < b.size(); ++i) {
        EXPECT_EQ(std::popcount(b.state(i)), 4);
        EXPECT_EQ(b.index(b.state(i)), i);
        if (i) EXPECT_LT(b.state(i - 1), b.state(i));
    }
    EXPECT_FALSE(b.index(0b111).has_value());
    EXPECT_THROW(FockBasis::sector(4, {5, {}}), ValidationError);
}

TEST(BuildMatrix, NumberOperatorEigenvalues) {
    TermList t;
    t.n_spin_orbitals = 1;
    t.terms = {make({0, 0}, -0.7)};
    const auto h = build_matrix(t);
    ASSERT_EQ(h.dimension(), 2u);
    EXPECT_DOUBLE_EQ(h.matrix(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(h.matrix(1, 1), -0.7);
    EXPECT_EQ(h.matrix(0, 1), 0.0);
}

TEST(BuildMatrix, HoppingSquaredIsProjector) {
    TermList t;
    t.n_spin_orbitals = 3;
    t.terms = {make({0, 2}, 1.0)};
    const auto h = build_matrix(t);
    const Eigen::MatrixXd sq = h.matrix * h.matrix;
    for (double v : eigenvalues(sq)) EXPECT_TRUE(std::abs(v) < 1e-14 || std::abs(v - 1) < 1e-14) << v;
}

TEST(BuildMatrix, EqualsDenseFermionOperators) {
    const testing::DenseFermions f6(6);
    for (std::uint64_t seed : {1u, 2u}) {
        const auto table = testing::random_integrals(3, seed);
        const auto terms = hamiltonian::enumerate_terms(table);
        const auto h = build_matrix(terms);
        EXPECT_LT((h.matrix - f6.sum(terms)).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((h.matrix - testing::integral_hamiltonian(table, f6)).cwiseAbs().maxCoeff(), 1e-11);
    }
    const testing::DenseFermions f8(8);
    const auto h4 = testing::molecule_terms("h4_chain_sto3g");
    EXPECT_LT((build_matrix(h4).matrix - f8.sum(h4)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BuildMatrix, HermitianAndSectorSized) {
    const auto t = testing::molecule_terms("lih_sto3g");
    const auto h = build_matrix(t, Sector{4, {}});
    EXPECT_EQ(h.dimension(), 495u);  // C(12,4)
    const double scale = h.matrix.cwiseAbs().maxCoeff();
    EXPECT_LE((h.matrix - h.matrix.transpose()).cwiseAbs().maxCoeff(), 1e-12 * scale);
}

TEST(BuildMatrix, CapExceededThrows) {
    const auto t = testing::molecule_terms("h4_chain_sto3g");
    OracleOptions o;
    o.max_spin_orbitals = 6;
    EXPECT_THROW(build_matrix(t, {}, o), ValidationError);
    auto big = t;
    big.n_spin_orbitals = 16;
    EXPECT_THROW(build_matrix(big), ValidationError);
}

TEST(GroundState, MatchesIndependentFci) {
    const auto ref = references();
    for (const auto& [name, r] : ref.items()) {
        if (name == "h2o_sto3g") continue;  // exercised by the acceptance binary
        const auto t = testing::molecule_terms(name);
        const auto h = build_matrix(t, hartree_fock_sector(t.n_electrons));
        const double e = ground_state(h).energy + t.constant;
        EXPECT_NEAR(e, r["e_fci"].get<double>(), 1e-8) << name;
    }
    const auto h2 = testing::molecule_terms("h2_sto3g");
    EXPECT_NEAR(ground_state(build_matrix(h2, Sector{2, {}})).energy + h2.constant, -1.137, 1e-3);
}

// Full-space minimum is the minimum over every conserved (N, N_up) block.
TEST(GroundState, SectorsTileTheFullSpace) {
    for (const char* name : {"h2_sto3g", "heh_plus_sto3g", "h4_chain_sto3g"}) {
        const auto t = testing::molecule_terms(name);
        const int n = t.n_spin_orbitals;
        const double full = ground_state(build_matrix(t)).energy;
        double best = std::numeric_limits<double>::infinity();
        for (int ne = 0; ne <= n; ++ne) {
            double best_n = std::numeric_limits<double>::infinity();
            for (int up = std::max(0, ne - n / 2); up <= std::min(ne, n / 2); ++up)
                best_n = std::min(best_n, ground_state(build_matrix(t, Sector{ne, up})).energy);
            EXPECT_NEAR(ground_state(build_matrix(t, Sector{ne, {}})).energy, best_n, 1e-10);
            best = std::min(best, best_n);
        }
        EXPECT_NEAR(full, best, 1e-10) << name;
    }
}

TEST(Strang, UnitaryOnGrid) {
    const auto o = oracle_for(testing::molecule_terms("h4_chain_sto3g"));
    for (double t : log_grid(1e-4, 1e-1, 8)) EXPECT_LE(o.at(t).unitarity_error, 1e-10) << t;
}

TEST(Strang, CommutingTermsAreExact) {
    TermList t;
    t.n_spin_orbitals = 4;
    t.n_electrons = 2;
    t.terms = {make({0, 0}, -1.0), make({1, 1}, -0.5), make({0, 1, 0, 1}, 0.4), make({2, 3}, 0.1)};
    std::sort(t.terms.begin(), t.terms.end());
    const auto o = StrangOracle(t, Sector{2, {}});
    for (double dt : {1e-3, 1e-2, 1e-1}) EXPECT_LT(o.at(dt).delta_e, 1e-12);
}

TEST(Strang, RichardsonMatchesLeadingCoefficient) {
    for (const char* name : {"h2_sto3g", "heh_plus_sto3g", "h4_chain_sto3g"}) {
        const auto o = oracle_for(testing::molecule_terms(name));
        const double t = 2e-2;
        auto signed_ratio = [&](double s) {
            const auto r = o.at(s);
            return (r.e_effective - r.e_fci) / (s * s);
        };
        const double extrapolated = (4.0 * signed_ratio(t / 2) - signed_ratio(t)) / 3.0;
        const double c = o.leading_error_coefficient();
        ASSERT_NE(c, 0.0) << name;
        EXPECT_LT(std::abs(extrapolated - c) / std::abs(c), 1e-4) << name;
    }
}

TEST(Strang, RigorousBoundDominatesExactError) {
    for (const char* name : {"h2_sto3g", "heh_plus_sto3g", "h4_chain_sto3g"}) {
        const auto terms = testing::molecule_terms(name);
        const double h = trotter::exhaustive_error_constant(terms).h_bound;
        const auto o = oracle_for(terms);
        for (double t : log_grid(1e-4, 1e-1, 20)) {
            const auto r = o.at(t);
            EXPECT_FALSE(r.phase_wrapped);
            EXPECT_LE(r.delta_e, h * t * t) << name << " t=" << t;
            EXPECT_NEAR(r.delta_e, std::abs(r.e_effective - r.e_fci), 1e-12);
            EXPECT_GT(r.overlap, 0.5);
        }
    }
}

TEST(Strang, OrderingChangesEnergyOnlyAtSecondOrder) {
    auto terms = testing::molecule_terms("h4_chain_sto3g");
    const auto fwd = oracle_for(terms);
    // a plain reversal only transposes U, so shuffle instead
    std::mt19937_64 rng(4);
    std::shuffle(terms.terms.begin(), terms.terms.end(), rng);
    const auto shuffled = oracle_for(terms);
    auto gap = [&](double t) { return std::abs(fwd.at(t).e_effective - shuffled.at(t).e_effective); };
    const double ratio = gap(1e-2) / gap(5e-3);
    EXPECT_GT(ratio, 3.5);
    EXPECT_LT(ratio, 4.5);
}

TEST(Strang, EmpiricalTrotterNumber) {
    const auto o = oracle_for(testing::molecule_terms("h4_chain_sto3g"));
    const auto tight = o.empirical_trotter_number(1e-4);
    const auto loose = o.empirical_trotter_number(1e-3);
    EXPECT_GE(tight, loose);
    EXPECT_LE(o.at(1.0 / static_cast<double>(tight)).delta_e, 1e-4);
    if (tight > 1) EXPECT_GT(o.at(1.0 / static_cast<double>(tight - 1)).delta_e, 1e-4);
    // monotone through the band between the two targets
    std::uint64_t prev = tight;
    for (double target : log_grid(1e-4, 1e-3, 6)) {
        const auto r = o.empirical_trotter_number(target);
        EXPECT_LE(r, prev);
        prev = r;
    }
    EXPECT_THROW(o.empirical_trotter_number(0.0), ValidationError);
}

TEST(Strang, RejectsBadTime) {
    const auto o = oracle_for(testing::molecule_terms("h2_sto3g"));
    EXPECT_THROW(o.at(0.0), ValidationError);
    EXPECT_TRUE(o.at(3.0).phase_wrapped);
}

TEST(HartreeFock, NonInteractingIsExact) {
    hamiltonian::IntegralTable table;
    table.n_spatial = 3;
    table.n_electrons = 2;
    table.set_one_body(0, 0, -1.2);
    table.set_one_body(1, 1, -0.3);
    table.set_one_body(2, 2, 0.4);
    const auto t = hamiltonian::enumerate_terms(table);
    const auto o = hartree_fock_overlap(t, 2);
    EXPECT_NEAR(o.overlap, 1.0, 1e-12);
    EXPECT_FALSE(o.degenerate);
}

TEST(HartreeFock, MoleculesMatchReferences) {
    const auto ref = references();
    for (const char* name : {"h2_sto3g", "h2_sto3g_stretched", "heh_plus_sto3g", "h4_chain_sto3g", "lih_sto3g"}) {
        const auto t = testing::molecule_terms(name);
        EXPECT_NEAR(hartree_fock_overlap(t, t.n_electrons).overlap, ref[name]["hf_overlap"].get<double>(), 1e-6)
            << name;
    }
    const auto eq = testing::molecule_terms("h2_sto3g");
    const auto st = testing::molecule_terms("h2_sto3g_stretched");
    const double a = hartree_fock_overlap(eq, 2).overlap, b = hartree_fock_overlap(st, 2).overlap;
    EXPECT_GE(a, 0.98);
    EXPECT_LT(b, a - 0.2);
}

TEST(HartreeFock, DegenerateGroundFlagged) {
    TermList t;
    t.n_spin_orbitals = 4;
    t.n_electrons = 1;
    // orbitals 0 and 2 are both up spin and tie for the lowest level
    t.terms = {make({0, 0}, -1.0), make({2, 2}, -1.0), make({1, 1}, 0.5), make({3, 3}, 0.5)};
    std::sort(t.terms.begin(), t.terms.end());
    const auto o = hartree_fock_overlap(t, 1);
    EXPECT_TRUE(o.degenerate);
    EXPECT_EQ(o.degeneracy, 2);
    EXPECT_NEAR(o.overlap, 1.0, 1e-12);  // weight on the degenerate projector
}

}  // namespace
}  // namespace qre

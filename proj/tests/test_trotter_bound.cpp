#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "qre/error.hpp"
#include "qre/trotter_bound.hpp"
#include "test_support.hpp"

namespace qre {
namespace {

using hamiltonian::classify;
using hamiltonian::HamiltonianTerm;
using hamiltonian::TermClass;
using hamiltonian::TermList;
using namespace trotter;

HamiltonianTerm make(std::vector<int> ops, double c = 1.0) {
    return HamiltonianTerm(classify(ops), ops, c);
}

// Every admissible term on n spin orbitals, with random coefficients.
TermList all_terms(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.2, 1.5);
    TermList out;
    out.n_spin_orbitals = n;
    for (int p = 0; p < n; ++p) out.terms.push_back(make({p, p}, u(rng)));
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) out.terms.push_back(make({p, q}, u(rng)));
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) out.terms.push_back(make({a, b, a, b}, u(rng)));
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = c + 1; d < n; ++d)
                    if (std::pair(a, b) < std::pair(c, d)) out.terms.push_back(make({a, b, c, d}, u(rng)));
    std::sort(out.terms.begin(), out.terms.end());
    return out;
}

Eigen::MatrixXd comm(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return a * b - b * a; }

// Sum straight from the definition: every ordered (a, b, c), both indicator branches.
double explicit_triple_sum(const TermList& t, bool (*w)(const HamiltonianTerm&, const HamiltonianTerm&,
                                                        const HamiltonianTerm&)) {
    const auto L = t.terms.size();
    double s = 0.0;
    for (std::size_t a = 0; a < L; ++a)
        for (std::size_t b = 0; b < L; ++b)
            for (std::size_t c = 0; c < L; ++c) {
                const double ind = (a > b && c > b ? 1.0 : 0.0) + (b > a && c == a ? 1.0 : 0.0);
                if (ind == 0.0) continue;
                const auto &ta = t.terms[a], &tb = t.terms[b], &tc = t.terms[c];
                if (!w(ta, tb, tc)) continue;
                s += 4.0 * ta.norm() * tb.norm() * tc.norm() * ind;
            }
    return s;
}

TEST(Rules, BothDiagonalVanishes) {
    const auto a = make({0, 1}), pp = make({0, 0}), pp2 = make({1, 1}), nn = make({0, 1, 0, 1});
    EXPECT_FALSE(double_commutator_nonzero(a, pp, pp2));
    EXPECT_FALSE(double_commutator_nonzero(a, pp, nn));
    EXPECT_FALSE(double_commutator_nonzero(a, nn, nn));
}

TEST(Rules, DisjointSupportsVanish) {
    EXPECT_FALSE(double_commutator_nonzero(make({1, 2}), make({3, 4}), make({5, 6})));
    // b, c disjoint alone is enough
    EXPECT_FALSE(double_commutator_nonzero(make({0, 3}), make({0, 1}), make({2, 3})));
    // a disjoint from both
    EXPECT_FALSE(double_commutator_nonzero(make({4, 5}), make({0, 1}), make({1, 2})));
}

TEST(Rules, HoppingWithMatchingOuterIndicesVanishes) {
    const auto pr = make({0, 2});
    const auto pqqr = make({0, 1, 1, 2});
    ASSERT_EQ(pqqr.term_class(), TermClass::PQQR);
    EXPECT_FALSE(double_commutator_nonzero(make({0, 1}), pr, pqqr));
    EXPECT_FALSE(double_commutator_nonzero(make({0, 1}), pqqr, pr));
}

TEST(Rules, OverlappingHoppingsDoNotVanish) {
    EXPECT_TRUE(double_commutator_nonzero(make({0, 1}), make({0, 1}), make({1, 2})));
}

// Any certified zero must really be zero; over-counting is allowed.
TEST(Rules, ConservativeAgainstDenseCommutators) {
    const auto t = all_terms(4, 11);
    const testing::DenseFermions f(4);
    std::vector<Eigen::MatrixXd> m;
    for (const auto& x : t.terms) m.push_back(f.term(x));
    int certified = 0, overcount = 0;
    for (std::size_t a = 0; a < m.size(); ++a)
        for (std::size_t b = 0; b < m.size(); ++b)
            for (std::size_t c = 0; c < m.size(); ++c) {
                const double n = comm(m[a], comm(m[b], m[c])).cwiseAbs().maxCoeff();
                const bool claim = double_commutator_nonzero(t.terms[a], t.terms[b], t.terms[c]);
                if (!claim) {
                    ++certified;
                    ASSERT_LT(n, 1e-12) << "rules zeroed a nonzero commutator at " << a << "," << b
                                        << "," << c;
                } else if (n < 1e-12) {
                    ++overcount;
                }
            }
    EXPECT_GT(certified, 0);
    EXPECT_GT(overcount, 0);  // the rules are not exact on this set
}

TEST(Rules, ConservativeOnRandomSixOrbitalTriples) {
    const auto t = all_terms(6, 5);
    const testing::DenseFermions f(6);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> pick(0, t.terms.size() - 1);
    for (int k = 0; k < 3000; ++k) {
        const auto a = pick(rng), b = pick(rng), c = pick(rng);
        if (double_commutator_nonzero(t.terms[a], t.terms[b], t.terms[c])) continue;
        const auto A = f.term(t.terms[a]), B = f.term(t.terms[b]), C = f.term(t.terms[c]);
        ASSERT_LT(comm(A, comm(B, C)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Gamma, IndicatorBranches) {
    TermList t;
    t.terms = {make({0, 1}, 0.5), make({1, 2}, 2.0), make({0, 2}, 3.0)};
    // a > b and c > b
    EXPECT_DOUBLE_EQ(gamma(t, 2, 0, 1), 4.0 * 3.0 * 0.5 * 2.0);
    // b > a and c == a
    EXPECT_DOUBLE_EQ(gamma(t, 0, 1, 0), 4.0 * 0.5 * 2.0 * 0.5);
    EXPECT_EQ(gamma(t, 0, 0, 0), 0.0);
    EXPECT_GT(gamma(t, 1, 0, 2), 0.0);
    EXPECT_EQ(gamma(t, 0, 1, 2), 0.0);  // b > a but c != a
}

TEST(Exhaustive, MatchesExplicitTripleSum) {
    for (const char* name : {"h2_sto3g", "heh_plus_sto3g", "h4_chain_sto3g"}) {
        const auto t = testing::molecule_terms(name);
        const double ref = explicit_triple_sum(t, &double_commutator_nonzero);
        const auto e = exhaustive_error_constant(t);
        ASSERT_GT(ref, 0) << name;
        EXPECT_LT(std::abs(e.h_bound - ref) / ref, 1e-12) << name;
    }
    const auto r = hamiltonian::enumerate_terms(testing::random_integrals(3, 9));
    const double ref = explicit_triple_sum(r, &double_commutator_nonzero);
    EXPECT_LT(std::abs(exhaustive_error_constant(r).h_bound - ref) / ref, 1e-12);
}

TEST(Exhaustive, DominatesDenseCommutatorSum) {
    const auto t = all_terms(4, 2);
    const testing::DenseFermions f(4);
    std::vector<Eigen::MatrixXd> m;
    for (const auto& x : t.terms) m.push_back(f.term(x));
    const auto L = t.terms.size();
    double exact_w = 0.0;
    for (std::size_t a = 0; a < L; ++a)
        for (std::size_t b = 0; b < L; ++b)
            for (std::size_t c = 0; c < L; ++c) {
                const double ind = (a > b && c > b ? 1.0 : 0.0) + (b > a && c == a ? 1.0 : 0.0);
                if (ind == 0.0 || comm(m[a], comm(m[b], m[c])).cwiseAbs().maxCoeff() < 1e-12) continue;
                exact_w += 4.0 * t.terms[a].norm() * t.terms[b].norm() * t.terms[c].norm() * ind;
            }
    EXPECT_GE(exhaustive_error_constant(t).h_bound, exact_w);
}

TEST(Exhaustive, ContributionsAreNonNegativeAndSum) {
    const auto t = testing::molecule_terms("lih_sto3g");
    const auto e = exhaustive_error_constant(t);
    double s = 0.0;
    for (const auto& [k, v] : e.per_class_contribution) {
        EXPECT_GE(v, 0.0) << class_triple_name(k);
        s += v;
    }
    EXPECT_NEAR(s, e.h_bound, 1e-12 * e.h_bound);
    EXPECT_TRUE(e.exhaustive);
}

TEST(Exhaustive, PerClassMatchesIndependentStrata) {
    const auto t = testing::molecule_terms("h4_chain_sto3g");
    const auto e = exhaustive_error_constant(t);
    std::map<ClassTriple, double> ref;
    const auto L = t.terms.size();
    for (std::size_t a = 0; a < L; ++a)
        for (std::size_t b = 0; b < L; ++b)
            for (std::size_t c = 0; c < L; ++c) {
                const double g = gamma(t, a, b, c);
                if (g > 0)
                    ref[{t.terms[a].term_class(), t.terms[b].term_class(), t.terms[c].term_class()}] += g;
            }
    for (const auto& [k, v] : ref) {
        ASSERT_TRUE(e.per_class_contribution.count(k)) << class_triple_name(k);
        EXPECT_NEAR(e.per_class_contribution.at(k), v, 1e-12 * v);
    }
}

TEST(Exhaustive, SerialEqualsParallelBitwise) {
    const auto t = testing::molecule_terms("lih_sto3g");
    EXPECT_EQ(exhaustive_error_constant(t, Execution::serial).h_bound,
              exhaustive_error_constant(t, Execution::parallel).h_bound);
}

TEST(Exhaustive, CommutingListGivesZero) {
    TermList t;
    t.terms = {make({0, 0}, 1.0), make({1, 1}, 2.0), make({0, 1, 0, 1}, 0.3), make({2, 3}, 0.7),
               make({4, 5}, 0.2)};
    std::sort(t.terms.begin(), t.terms.end());
    EXPECT_EQ(exhaustive_error_constant(t).h_bound, 0.0);
    EXPECT_EQ(estimate_error_constant(t, 1000, 1).h_bound, 0.0);
}

TEST(Exhaustive, AddingATermNeverDecreases) {
    const auto full = testing::molecule_terms("h4_chain_sto3g");
    const double h = exhaustive_error_constant(full).h_bound;
    for (std::size_t k = 0; k < full.terms.size(); k += 7) {
        auto less = full;
        less.terms.erase(less.terms.begin() + static_cast<std::ptrdiff_t>(k));
        EXPECT_LE(exhaustive_error_constant(less).h_bound, h) << "dropped term " << k;
    }
}

TEST(Sampled, AgreesWithExhaustiveWithinThreeErrors) {
    for (const char* name : {"h4_chain_sto3g", "lih_sto3g"}) {
        const auto t = testing::molecule_terms(name);
        const double h = exhaustive_error_constant(t).h_bound;
        const auto e = estimate_error_constant(t, kTestSamplesPerClass, 17);
        ASSERT_GT(e.absolute_std_error, 0) << name;
        EXPECT_LT(std::abs(e.h_bound - h), 3.0 * e.absolute_std_error) << name;
        EXPECT_EQ(e.samples_per_class, kTestSamplesPerClass);
        EXPECT_EQ(e.rng_seed, 17u);
    }
}

TEST(Sampled, SeedDeterminism) {
    const auto t = testing::molecule_terms("lih_sto3g");
    const auto a = estimate_error_constant(t, 5000, 42);
    const auto b = estimate_error_constant(t, 5000, 42);
    EXPECT_EQ(a.h_bound, b.h_bound);
    EXPECT_EQ(a.absolute_std_error, b.absolute_std_error);
    const auto c = estimate_error_constant(t, 5000, 43);
    EXPECT_NE(a.h_bound, c.h_bound);
    EXPECT_LT(std::abs(a.h_bound - c.h_bound),
              3.0 * std::hypot(a.absolute_std_error, c.absolute_std_error));
}

TEST(Sampled, SerialEqualsParallelBitwise) {
    const auto t = testing::molecule_terms("h2o_sto3g");
    const auto s = estimate_error_constant(t, 20000, 5, Execution::serial);
    const auto p = estimate_error_constant(t, 20000, 5, Execution::parallel);
    EXPECT_EQ(s.h_bound, p.h_bound);
    EXPECT_EQ(s.absolute_std_error, p.absolute_std_error);
}

// Relative error shrinks as 1/sqrt(S); at the production minimum it is below 1%.
TEST(Sampled, ProductionSampleCountMeetsOnePercent) {
    const auto t = testing::molecule_terms("lih_sto3g");
    const auto e = estimate_error_constant(t, 100'000, 8);
    const double scaled = e.sample_std_error *
                          std::sqrt(100'000.0 / static_cast<double>(kProductionSamplesPerClass));
    EXPECT_LE(scaled, 0.01);
}

TEST(Sampled, SummedContributionsMatchBound) {
    const auto e = estimate_error_constant(testing::molecule_terms("h4_chain_sto3g"), 2000, 1);
    double s = 0;
    for (const auto& [k, v] : e.per_class_contribution) {
        EXPECT_GE(v, 0.0);
        s += v;
    }
    EXPECT_NEAR(s, e.h_bound, 1e-12 * e.h_bound);
}

TEST(Sampled, Errors) {
    TermList empty;
    EXPECT_THROW(estimate_error_constant(empty, 10, 1), ValidationError);
    EXPECT_THROW(exhaustive_error_constant(empty), ValidationError);
    EXPECT_THROW(estimate_error_constant(testing::molecule_terms("h2_sto3g"), 0, 1), ValidationError);
}

TEST(Moments, MeanReproducesExhaustive) {
    const auto t = testing::molecule_terms("h4_chain_sto3g");
    const auto m = gamma_moments(t);
    const double L3 = std::pow(static_cast<double>(m.L), 3);
    EXPECT_NEAR(m.mean * L3, exhaustive_error_constant(t).h_bound, 1e-10 * m.mean * L3);
    EXPECT_GT(m.variance, 0.0);
}

TEST(Chebyshev, FormulaExamples) {
    EXPECT_EQ(chebyshev_samples(0.0, 10, 1.0), 0u);
    EXPECT_EQ(chebyshev_samples(1.0, 10, 1e3), 1u);
    EXPECT_EQ(chebyshev_samples(2.0, 10, 1e3), 2u);
    EXPECT_EQ(chebyshev_samples(1.0, 2, 1.0), 64u);
    EXPECT_EQ(chebyshev_samples(1.0, 1000, 1e-6), std::numeric_limits<std::uint64_t>::max());
    EXPECT_THROW(chebyshev_samples(1.0, 10, 0.0), ValidationError);
}

TEST(Chebyshev, SeventyFivePercentCoverage) {
    const auto t = testing::molecule_terms("h2_sto3g");
    const auto m = gamma_moments(t);
    const double h = m.mean * std::pow(static_cast<double>(m.L), 3);
    const double eps = 0.05 * h;
    const auto n = chebyshev_samples(m.variance, m.L, eps);
    ASSERT_GT(n, 0u);
    ASSERT_LT(n, 5'000'000u);
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed)
        if (std::abs(estimate_error_constant_uniform(t, n, seed) - h) < 2 * eps) ++hits;
    EXPECT_GE(hits, 75);
}

TEST(TrotterNumber, SquareRootLaw) {
    EXPECT_EQ(trotter_number(1e-3, 1e-3), 1u);
    EXPECT_EQ(trotter_number(1e4 * 1e-3, 1e-3), 100u);
    EXPECT_EQ(trotter_number(2.0, 1.0), 2u);
    EXPECT_THROW(trotter_number(0.0, 1.0), ValidationError);
    EXPECT_THROW(trotter_number(1.0, -1.0), ValidationError);
}

TEST(TrotterNumber, BackDerivedStructureOneRescaled) {
    const double eps = 1e-4;
    EXPECT_EQ(trotter_number(166.0 * 166.0 * eps, eps), 166u);
    EXPECT_EQ(trotter_number(165.2 * 165.2 * eps, eps), 166u);
}

TEST(TrotterModel, CalibrationPoints) {
    TrotterNumberModel m;
    m.beta_at_reference = 37;
    m.reference_spin_orbitals = 20;
    EXPECT_EQ(trotter_number_model(m, 20), 37u);
    EXPECT_EQ(trotter_number_model(m, 40), static_cast<std::uint64_t>(std::ceil(37 * std::pow(2.0, 2.5))));
    EXPECT_EQ(trotter_number_model(femoco_trotter_model(1, TrotterCase::rescaled), 108), 166u);
    EXPECT_EQ(trotter_number_model(femoco_trotter_model(1, TrotterCase::pessimistic), 108), 1075u);
    EXPECT_EQ(trotter_number_model(femoco_trotter_model(2, TrotterCase::rescaled), 114), 225u);
    EXPECT_EQ(trotter_number_model(femoco_trotter_model(2, TrotterCase::pessimistic), 114), 1233u);
    EXPECT_EQ(trotter_number_model(femoco_trotter_model(1, TrotterCase::rigorous), 108), 7'000'000u);
}

TEST(TrotterModel, Validation) {
    TrotterNumberModel m;
    m.scaling_exponent = 7;
    EXPECT_THROW(trotter_number_model(m, 10), ValidationError);
    m.scaling_exponent = 2.5;
    m.beta_at_reference = 0;
    EXPECT_THROW(trotter_number_model(m, 10), ValidationError);
    m.beta_at_reference = 1;
    EXPECT_THROW(trotter_number_model(m, 1), ValidationError);
    EXPECT_THROW(femoco_trotter_model(3, TrotterCase::rescaled), ValidationError);
    EXPECT_THROW(trotter_case_from_string("wild"), ValidationError);
    EXPECT_EQ(trotter_case_from_string("optimistic"), TrotterCase::optimistic);
}

}  // namespace
}  // namespace qre

#include "qre/trotter_bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "qre/error.hpp"

namespace qre::trotter {

namespace {

bool disjoint(std::span<const int> x, std::span<const int> y) {
    // supports are sorted and tiny
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        if (x[i] == y[j]) return false;
        if (x[i] < y[j]) ++i; else ++j;
    }
    return true;
}

// Indices that appear exactly once among the operator slots.
std::array<int, 4> outer_indices(const HamiltonianTerm& t, int& n) {
    auto ops = t.operator_indices();
    std::array<int, 4> out{};
    n = 0;
    for (int i : ops)
        if (std::count(ops.begin(), ops.end(), i) == 1) out[static_cast<std::size_t>(n++)] = i;
    std::sort(out.begin(), out.begin() + n);
    return out;
}

bool hopping_pair_commutes(const HamiltonianTerm& pq, const HamiltonianTerm& pqqr) {
    if (pq.term_class() != TermClass::PQ || pqqr.term_class() != TermClass::PQQR) return false;
    int n = 0;
    auto outer = outer_indices(pqqr, n);
    auto s = pq.support();
    return n == 2 && outer[0] == s[0] && outer[1] == s[1];
}

ClassTriple key_triple(std::size_t k) {
    return {static_cast<TermClass>(k / 25), static_cast<TermClass>((k / 5) % 5),
            static_cast<TermClass>(k % 5)};
}

constexpr std::size_t kStrata = 125;

}  // namespace

bool vanishes_directly(const HamiltonianTerm& a, const HamiltonianTerm& b,
                       const HamiltonianTerm& c) {
    if (disjoint(b.support(), c.support())) return true;
    if (disjoint(a.support(), b.support()) && disjoint(a.support(), c.support())) return true;
    if (b.is_diagonal() && c.is_diagonal()) return true;
    if (hopping_pair_commutes(b, c) || hopping_pair_commutes(c, b)) return true;
    return false;
}

bool double_commutator_nonzero(const HamiltonianTerm& a, const HamiltonianTerm& b,
                               const HamiltonianTerm& c) {
    if (vanishes_directly(a, b, c)) return false;
    // Jacobi: [a,[b,c]] = -[b,[c,a]] - [c,[a,b]]
    if (vanishes_directly(b, c, a) && vanishes_directly(c, a, b)) return false;
    return true;
}

std::string class_triple_name(const ClassTriple& t) {
    std::string s;
    for (int k = 0; k < 3; ++k) {
        if (k) s += ',';
        s += hamiltonian::to_string(t[static_cast<std::size_t>(k)]);
    }
    return s;
}

double gamma(const TermList& terms, std::size_t a, std::size_t b, std::size_t c,
             const NormModel& norm) {
    const bool first = a > b && c > b;
    const bool second = b > a && c == a;
    if (!first && !second) return 0.0;
    const auto& ta = terms.terms[a];
    const auto& tb = terms.terms[b];
    const auto& tc = terms.terms[c];
    if (!double_commutator_nonzero(ta, tb, tc)) return 0.0;
    return 4.0 * norm(ta) * norm(tb) * norm(tc);
}

namespace {

TrotterErrorEstimate assemble(const std::array<double, kStrata>& sums,
                              const std::array<double, kStrata>& var) {
    TrotterErrorEstimate e;
    double se2 = 0.0;
    for (std::size_t k = 0; k < kStrata; ++k) {
        if (sums[k] != 0.0 || var[k] != 0.0) e.per_class_contribution[key_triple(k)] = sums[k];
        e.h_bound += sums[k];
        se2 += var[k];
    }
    e.absolute_std_error = std::sqrt(se2);
    e.sample_std_error = e.h_bound > 0 ? e.absolute_std_error / e.h_bound : 0.0;
    return e;
}

}  // namespace

TrotterErrorEstimate exhaustive_error_constant(const TermList& terms, Execution exec,
                                               const NormModel& norm) {
    const std::size_t L = terms.terms.size();
    if (L == 0) throw ValidationError("error constant needs a nonempty term list");
    std::vector<double> n(L);
    std::vector<std::size_t> cls(L);
    for (std::size_t i = 0; i < L; ++i) {
        n[i] = norm(terms.terms[i]);
        cls[i] = static_cast<std::size_t>(terms.terms[i].term_class());
    }
    // One partial table per middle index b, reduced in order afterwards.
    std::vector<std::array<double, kStrata>> partial(L);
    auto row = [&](std::size_t b) {
        auto& acc = partial[b];
        acc.fill(0.0);
        const auto& tb = terms.terms[b];
        for (std::size_t a = 0; a < L; ++a) {
            const auto& ta = terms.terms[a];
            if (a > b) {
                for (std::size_t c = b + 1; c < L; ++c)
                    if (double_commutator_nonzero(ta, tb, terms.terms[c]))
                        acc[(cls[a] * 5 + cls[b]) * 5 + cls[c]] += 4.0 * n[a] * n[b] * n[c];
            } else if (a < b) {
                if (double_commutator_nonzero(ta, tb, ta))
                    acc[(cls[a] * 5 + cls[b]) * 5 + cls[a]] += 4.0 * n[a] * n[a] * n[b];
            }
        }
    };
    const auto sL = static_cast<std::ptrdiff_t>(L);
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t b = 0; b < sL; ++b) row(static_cast<std::size_t>(b));
    } else {
        for (std::ptrdiff_t b = 0; b < sL; ++b) row(static_cast<std::size_t>(b));
    }
    std::array<double, kStrata> sums{}, var{};
    for (const auto& p : partial)
        for (std::size_t k = 0; k < kStrata; ++k) sums[k] += p[k];
    auto e = assemble(sums, var);
    e.exhaustive = true;
    return e;
}

TrotterErrorEstimate estimate_error_constant(const TermList& terms,
                                             std::uint64_t samples_per_class,
                                             std::uint64_t seed, Execution exec,
                                             const NormModel& norm) {
    const std::size_t L = terms.terms.size();
    if (L == 0) throw ValidationError("error constant needs a nonempty term list");
    if (samples_per_class < 1) throw ValidationError("samples_per_class must be >= 1");

    std::array<std::vector<std::size_t>, 5> by_class;
    for (std::size_t i = 0; i < L; ++i)
        by_class[static_cast<std::size_t>(terms.terms[i].term_class())].push_back(i);

    constexpr std::uint64_t kBlock = 8192;
    const std::uint64_t blocks = (samples_per_class + kBlock - 1) / kBlock;
    struct Item {
        std::size_t stratum;
        std::uint64_t block;
    };
    std::vector<Item> items;
    for (std::size_t k = 0; k < kStrata; ++k) {
        auto t = key_triple(k);
        if (by_class[static_cast<std::size_t>(t[0])].empty() ||
            by_class[static_cast<std::size_t>(t[1])].empty() ||
            by_class[static_cast<std::size_t>(t[2])].empty())
            continue;
        for (std::uint64_t b = 0; b < blocks; ++b) items.push_back({k, b});
    }
    struct Moments {
        double sum = 0.0, sumsq = 0.0;
    };
    std::vector<Moments> result(items.size());
    auto run = [&](std::size_t it) {
        const auto [k, block] = items[it];
        const auto t = key_triple(k);
        const auto& A = by_class[static_cast<std::size_t>(t[0])];
        const auto& B = by_class[static_cast<std::size_t>(t[1])];
        const auto& C = by_class[static_cast<std::size_t>(t[2])];
        const CounterRng rng(seed, k);
        const std::uint64_t lo = block * kBlock;
        const std::uint64_t hi = std::min(samples_per_class, lo + kBlock);
        Moments m;
        for (std::uint64_t i = lo; i < hi; ++i) {
            const std::size_t a = A[rng.index(3 * i, A.size())];
            const std::size_t b = B[rng.index(3 * i + 1, B.size())];
            const std::size_t c = C[rng.index(3 * i + 2, C.size())];
            const double g = gamma(terms, a, b, c, norm);
            m.sum += g;
            m.sumsq += g * g;
        }
        result[it] = m;
    };
    const auto n_items = static_cast<std::ptrdiff_t>(items.size());
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t i = 0; i < n_items; ++i) run(static_cast<std::size_t>(i));
    } else {
        for (std::ptrdiff_t i = 0; i < n_items; ++i) run(static_cast<std::size_t>(i));
    }

    std::array<Moments, kStrata> per{};
    for (std::size_t i = 0; i < items.size(); ++i) {
        per[items[i].stratum].sum += result[i].sum;
        per[items[i].stratum].sumsq += result[i].sumsq;
    }
    std::array<double, kStrata> sums{}, var{};
    const double S = static_cast<double>(samples_per_class);
    for (std::size_t k = 0; k < kStrata; ++k) {
        auto t = key_triple(k);
        const double card = static_cast<double>(by_class[static_cast<std::size_t>(t[0])].size()) *
                            static_cast<double>(by_class[static_cast<std::size_t>(t[1])].size()) *
                            static_cast<double>(by_class[static_cast<std::size_t>(t[2])].size());
        if (card == 0.0) continue;
        const double mean = per[k].sum / S;
        sums[k] = card * mean;
        if (samples_per_class >= 2) {
            const double s2 = std::max(0.0, (per[k].sumsq - S * mean * mean) / (S - 1.0));
            var[k] = card * card * s2 / S;
        } else {
            // no spread estimate from one draw; charge the full contribution
            var[k] = sums[k] * sums[k];
        }
    }
    auto e = assemble(sums, var);
    e.samples_per_class = samples_per_class;
    e.rng_seed = seed;
    return e;
}

GammaMoments gamma_moments(const TermList& terms, const NormModel& norm) {
    const std::size_t L = terms.terms.size();
    if (L == 0) throw ValidationError("error constant needs a nonempty term list");
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t b = 0; b < L; ++b)
        for (std::size_t a = 0; a < L; ++a) {
            if (a > b) {
                for (std::size_t c = b + 1; c < L; ++c) {
                    const double g = gamma(terms, a, b, c, norm);
                    s1 += g;
                    s2 += g * g;
                }
            } else if (a < b) {
                const double g = gamma(terms, a, b, a, norm);
                s1 += g;
                s2 += g * g;
            }
        }
    const double L3 = std::pow(static_cast<double>(L), 3);
    GammaMoments m;
    m.L = L;
    m.mean = s1 / L3;
    m.variance = std::max(0.0, s2 / L3 - m.mean * m.mean);
    return m;
}

double estimate_error_constant_uniform(const TermList& terms, std::uint64_t samples,
                                       std::uint64_t seed, const NormModel& norm) {
    const std::size_t L = terms.terms.size();
    if (L == 0) throw ValidationError("error constant needs a nonempty term list");
    if (samples == 0) throw ValidationError("samples must be >= 1");
    const CounterRng rng(seed, 0xC4EB);
    double sum = 0.0;
    for (std::uint64_t i = 0; i < samples; ++i)
        sum += gamma(terms, rng.index(3 * i, L), rng.index(3 * i + 1, L), rng.index(3 * i + 2, L),
                     norm);
    return std::pow(static_cast<double>(L), 3) * sum / static_cast<double>(samples);
}

std::uint64_t chebyshev_samples(double variance, std::uint64_t L, double eps) {
    if (!(eps > 0)) throw ValidationError("chebyshev_samples needs a positive precision");
    if (variance < 0) throw ValidationError("variance must be non-negative");
    const double l3 = std::pow(static_cast<double>(L), 3);
    const double s = std::ceil(l3 * l3 * variance / (eps * eps));
    if (!(s < 18446744073709551615.0)) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(s);
}

std::uint64_t tolerant_ceil(double x) {
    if (!(x >= 0) || !std::isfinite(x)) throw ValidationError("tolerant_ceil needs finite x >= 0");
    const double r = std::round(x);
    if (std::abs(x - r) <= 1e-12 * std::max(1.0, std::abs(x))) return static_cast<std::uint64_t>(r);
    return static_cast<std::uint64_t>(std::ceil(x));
}

std::uint64_t trotter_number(double h, double epsilon2) {
    if (!(h > 0) || !(epsilon2 > 0))
        throw ValidationError("trotter_number needs h > 0 and epsilon2 > 0");
    return tolerant_ceil(std::sqrt(h / epsilon2));
}

std::string_view to_string(TrotterCase c) {
    switch (c) {
        case TrotterCase::rigorous: return "rigorous";
        case TrotterCase::pessimistic: return "pessimistic";
        case TrotterCase::rescaled: return "rescaled";
        case TrotterCase::optimistic: return "optimistic";
    }
    return "?";
}

TrotterCase trotter_case_from_string(std::string_view s) {
    for (auto c : {TrotterCase::rigorous, TrotterCase::pessimistic, TrotterCase::rescaled,
                   TrotterCase::optimistic})
        if (to_string(c) == s) return c;
    throw ValidationError("unknown Trotter case '" + std::string(s) + "'");
}

void TrotterNumberModel::validate() const {
    if (!(beta_at_reference > 0)) throw ValidationError("beta_at_reference must be > 0");
    if (reference_spin_orbitals < 1) throw ValidationError("reference_spin_orbitals must be >= 1");
    if (!(scaling_exponent >= 2 && scaling_exponent <= 6))
        throw ValidationError("scaling_exponent must lie in [2, 6]");
}

std::uint64_t trotter_number_model(const TrotterNumberModel& model, int n_spin_orbitals) {
    model.validate();
    if (n_spin_orbitals < 2) throw ValidationError("n_spin_orbitals must be >= 2");
    const double ratio = static_cast<double>(n_spin_orbitals) / model.reference_spin_orbitals;
    return tolerant_ceil(model.beta_at_reference * std::pow(ratio, model.scaling_exponent));
}

TrotterNumberModel femoco_trotter_model(int structure, TrotterCase c) {
    if (structure != 1 && structure != 2) throw ValidationError("structure must be 1 or 2");
    static constexpr double beta[2][4] = {{7e6, 1075, 166, 24}, {9.5e6, 1233, 225, 25}};
    TrotterNumberModel m;
    m.trotter_case = c;
    m.beta_at_reference = beta[structure - 1][static_cast<int>(c)];
    m.reference_spin_orbitals = structure == 1 ? 108 : 114;
    m.scaling_exponent = 2.5;
    return m;
}

}  // namespace qre::trotter

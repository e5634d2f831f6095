#include "qre/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qre/error.hpp"

namespace qre::parallel {

void ParParams::validate() const {
    if (n_levels < 1) throw ValidationError("PAR needs n_levels >= 1");
    if (n_levels > 62) throw ValidationError("PAR n_levels above 62 is not supported");
    if (rotations_cached < 1) throw ValidationError("PAR needs rotations_cached >= 1");
}

double par_expected_rotations(const ParParams& p) {
    p.validate();
    const double q = std::ldexp(1.0, -static_cast<int>(p.n_levels));
    const double m = static_cast<double>(p.rotations_cached);
    return -std::expm1(m * std::log1p(-q)) / q;
}

double par_factory_time_per_rotation(const ParParams& p) {
    p.validate();
    const double n = static_cast<double>(p.n_levels);
    const double q = std::ldexp(1.0, -static_cast<int>(p.n_levels));
    return (2.0 - (n + 2.0) * q) + (static_cast<double>(p.synthesis_cost) + n) * q;
}

double par_factory_time_no_feed_forward(const ParParams& p) {
    p.validate();
    return std::ldexp(static_cast<double>(p.synthesis_cost), -static_cast<int>(p.n_levels));
}

std::uint64_t par_rotation_factories(const ParParams& p) {
    p.validate();
    return p.n_levels * (p.synthesis_cost + p.n_levels);
}

std::uint64_t par_rotation_factories_nc(const ParParams& p) {
    p.validate();
    return p.n_levels * p.synthesis_cost;
}

namespace {

constexpr std::uint64_t kTrialBlock = 4096;

// Pulls fair coin flips from a counter stream, 64 at a time.
class CoinStream {
public:
    CoinStream(const CounterRng& rng) : rng_(rng) {}

    // n flips; true if all came up "fail"
    bool all_fail(std::uint64_t n) {
        for (std::uint64_t k = 0; k < n; ++k)
            if (!flip()) return false;
        return true;
    }

    bool flip() {
        if (left_ == 0) {
            bits_ = rng_.at(counter_++);
            left_ = 64;
        }
        const bool b = bits_ & 1;
        bits_ >>= 1;
        --left_;
        return b;
    }

private:
    const CounterRng& rng_;
    std::uint64_t counter_ = 0;
    std::uint64_t bits_ = 0;
    int left_ = 0;
};

template <class Trial>
MonteCarloStats run_blocks(std::uint64_t trials, std::uint64_t seed, Execution exec, Trial trial) {
    if (trials < 2) throw ValidationError("Monte Carlo needs at least 2 trials");
    const std::uint64_t blocks = (trials + kTrialBlock - 1) / kTrialBlock;
    std::vector<double> s1(blocks), s2(blocks);
    auto block = [&](std::uint64_t b) {
        const CounterRng rng(seed, b);
        CoinStream coins(rng);
        const std::uint64_t lo = b * kTrialBlock, hi = std::min(trials, lo + kTrialBlock);
        double a = 0, q = 0;
        for (std::uint64_t i = lo; i < hi; ++i) {
            const double x = trial(coins);
            a += x;
            q += x * x;
        }
        s1[b] = a;
        s2[b] = q;
    };
    const auto nb = static_cast<std::ptrdiff_t>(blocks);
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t b = 0; b < nb; ++b) block(static_cast<std::uint64_t>(b));
    } else {
        for (std::ptrdiff_t b = 0; b < nb; ++b) block(static_cast<std::uint64_t>(b));
    }
    double a = 0, q = 0;
    for (std::uint64_t b = 0; b < blocks; ++b) {
        a += s1[b];
        q += s2[b];
    }
    const double n = static_cast<double>(trials);
    MonteCarloStats st;
    st.trials = trials;
    st.mean = a / n;
    const double var = std::max(0.0, (q - n * st.mean * st.mean) / (n - 1.0));
    st.std_error = std::sqrt(var / n);
    return st;
}

}  // namespace

MonteCarloStats simulate_par_rotations(const ParParams& p, std::uint64_t trials, std::uint64_t seed,
                                       Execution exec) {
    p.validate();
    return run_blocks(trials, seed, exec, [&](CoinStream& coins) {
        std::uint64_t k = 1;
        // the cache is exhausted once every level of a rotation has failed
        while (k < p.rotations_cached && !coins.all_fail(p.n_levels)) ++k;
        return static_cast<double>(k);
    });
}

MonteCarloStats simulate_par_factory_time(const ParParams& p, std::uint64_t trials,
                                          std::uint64_t seed, Execution exec) {
    p.validate();
    return run_blocks(trials, seed, exec, [&](CoinStream& coins) {
        for (std::uint64_t j = 1; j <= p.n_levels; ++j)
            if (!coins.flip()) return static_cast<double>(j);
        return static_cast<double>(p.n_levels + p.synthesis_cost);
    });
}

double nesting_parallelism(const hamiltonian::TermList& terms) {
    if (terms.terms.empty()) throw ValidationError("nesting needs a nonempty term list");
    int width = terms.n_spin_orbitals;
    for (const auto& t : terms.terms)
        for (int i : t.support()) width = std::max(width, i + 1);
    std::vector<char> used(static_cast<std::size_t>(width), 0);
    std::vector<int> touched;
    std::size_t batches = 1;
    for (const auto& t : terms.terms) {
        const auto s = t.support();
        const bool clash = std::any_of(s.begin(), s.end(),
                                       [&](int i) { return used[static_cast<std::size_t>(i)] != 0; });
        if (clash) {
            ++batches;
            for (int i : touched) used[static_cast<std::size_t>(i)] = 0;
            touched.clear();
        }
        for (int i : s) {
            used[static_cast<std::size_t>(i)] = 1;
            touched.push_back(i);
        }
    }
    return static_cast<double>(terms.terms.size()) / static_cast<double>(batches);
}

}  // namespace qre::parallel

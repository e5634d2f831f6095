#include "qre/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "qre/error.hpp"
#include "qre/parallel.hpp"

namespace qre::cost {

PhaseEstimationModel PhaseEstimationModel::standard_qpe() { return {"standard_qpe", 8 * std::numbers::pi}; }
PhaseEstimationModel PhaseEstimationModel::rfpe() { return {"rfpe", 2.3}; }
PhaseEstimationModel PhaseEstimationModel::optimal_surrogate() {
    return {"optimal_surrogate", std::numbers::pi / 2};
}

PhaseEstimationModel PhaseEstimationModel::from_name(std::string_view name) {
    if (name == "standard" || name == "standard_qpe") return standard_qpe();
    if (name == "rfpe") return rfpe();
    if (name == "optimal" || name == "optimal_surrogate") return optimal_surrogate();
    throw ValidationError("unknown phase-estimation model '" + std::string(name) + "'");
}

void PhaseEstimationModel::validate() const {
    if (!(alpha > 0)) throw ValidationError("phase-estimation alpha must be > 0");
}

SynthesisModel SynthesisModel::deterministic_worst_case() {
    return {"deterministic_worst_case", 4.0, 11.0};
}
SynthesisModel SynthesisModel::fallback_average() { return {"fallback_average", 1.15, 9.2}; }

SynthesisModel SynthesisModel::from_name(std::string_view name) {
    if (name == "deterministic" || name == "deterministic_worst_case") return deterministic_worst_case();
    if (name == "average" || name == "fallback_average") return fallback_average();
    throw ValidationError("unknown synthesis model '" + std::string(name) + "'");
}

double synthesis_lower_bound(double log2_inverse_error) { return 4.0 * log2_inverse_error - 9.0; }

std::string_view to_string(Combination c) {
    return c == Combination::worst_case ? "worst_case" : "variance";
}

Combination combination_from_string(std::string_view s) {
    if (s == "worst" || s == "worst_case") return Combination::worst_case;
    if (s == "variance") return Combination::variance;
    throw ValidationError("unknown combination rule '" + std::string(s) + "'");
}

double ErrorBudget::combined() const {
    if (combination == Combination::worst_case)
        return epsilon1_pe + epsilon2_trotter + epsilon3_synth;
    return epsilon2_trotter + std::hypot(epsilon1_pe, epsilon3_synth);
}

bool ErrorBudget::valid() const {
    return epsilon_total > 0 && epsilon1_pe > 0 && epsilon2_trotter > 0 && epsilon3_synth > 0 &&
           combined() <= epsilon_total * (1 + 1e-12);
}

void ErrorBudget::validate() const {
    if (!(epsilon_total > 0)) throw ValidationError("epsilon_total must be > 0");
    if (!(epsilon1_pe > 0 && epsilon2_trotter > 0 && epsilon3_synth > 0))
        throw ValidationError("all budget components must be > 0");
    if (!(combined() <= epsilon_total * (1 + 1e-12)))
        throw ValidationError("budget components exceed epsilon_total under the " +
                              std::string(to_string(combination)) + " rule");
}

ErrorBudget ErrorBudget::equal_split(double eps, Combination c) {
    ErrorBudget b{eps, eps / 3, eps / 3, eps / 3, c};
    if (c == Combination::variance) {
        // eps2 = eps/2, eps1 = eps3 with hypot = eps/2
        b.epsilon2_trotter = eps / 2;
        b.epsilon1_pe = b.epsilon3_synth = eps / (2 * std::numbers::sqrt2);
    }
    return b;
}

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::serial: return "serial";
        case Strategy::nesting: return "nesting";
        case Strategy::par: return "par";
    }
    return "?";
}

Strategy strategy_from_string(std::string_view s) {
    if (s == "serial") return Strategy::serial;
    if (s == "nesting") return Strategy::nesting;
    if (s == "par" || s == "PAR") return Strategy::par;
    throw ValidationError("unknown strategy '" + std::string(s) + "'");
}

namespace {

struct Evaluation {
    double reps;
    double steps;
    double log_arg;
};

Evaluation evaluate_parts(double M, const ErrorBudget& b, double beta, double alpha) {
    const double reps = std::ceil(alpha / b.epsilon1_pe);
    const double steps = std::ceil(beta * std::sqrt(b.epsilon_total / b.epsilon2_trotter));
    const double log_arg = 2 * M * steps / b.epsilon3_synth;
    if (!(log_arg > 1)) throw ValidationError("degenerate budget: synthesis log argument <= 1");
    return {reps, steps, log_arg};
}

}  // namespace

double cost_function(double M, const ErrorBudget& b, double beta, double alpha, double gamma,
                     double delta) {
    const auto e = evaluate_parts(M, b, beta, alpha);
    return 2 * M * e.reps * e.steps * (gamma * std::log2(e.log_arg) + delta);
}

double cost_function_smooth(double M, const ErrorBudget& b, double beta, double alpha,
                            double gamma, double delta) {
    return 2 * M * (alpha / b.epsilon1_pe) * (beta * std::sqrt(b.epsilon_total / b.epsilon2_trotter)) *
           (gamma * std::log2(2 * M * beta / b.epsilon3_synth) + delta);
}

LogicalCostReport evaluate_cost(double M, const ErrorBudget& budget, double beta,
                                const PhaseEstimationModel& pe, const SynthesisModel& synth,
                                double t_gate_seconds) {
    if (!(M >= 1)) throw ValidationError("M must be >= 1");
    if (!(beta >= 1)) throw ValidationError("beta must be >= 1");
    pe.validate();
    budget.validate();
    const auto e = evaluate_parts(M, budget, beta, pe.alpha);
    LogicalCostReport r;
    r.strategy = Strategy::serial;
    r.budget = budget;
    r.M = M;
    r.beta = beta;
    r.alpha = pe.alpha;
    r.pe_name = pe.name;
    r.synthesis_name = synth.name;
    r.gamma = synth.gamma;
    r.delta = synth.delta;
    r.pe_repetitions = static_cast<std::uint64_t>(e.reps);
    r.trotter_steps_per_unit_time = static_cast<std::uint64_t>(e.steps);
    r.rotation_count = 2 * M * e.steps * e.reps;
    r.log2_inverse_synthesis_error = std::log2(e.log_arg);
    r.t_per_rotation = synth.t_per_rotation(r.log2_inverse_synthesis_error);
    r.synthesis_above_lower_bound =
        r.t_per_rotation >= synthesis_lower_bound(r.log2_inverse_synthesis_error);
    r.t_count = 2 * M * e.reps * e.steps * r.t_per_rotation;
    r.clifford_count = kCliffordPerT * r.t_count;
    r.clifford_from_ratio = true;
    r.t_gate_seconds = t_gate_seconds;
    r.wall_time = r.t_count * t_gate_seconds;
    return r;
}

namespace {

constexpr double kGolden = 0.6180339887498949;

template <class F>
double golden_min(F f, double lo, double hi, int iters = 200) {
    double a = lo, b = hi;
    double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters && (b - a) > 1e-15 * std::abs(a + b); ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = f(x2);
        }
    }
    return f1 < f2 ? x1 : x2;
}

struct Problem {
    double M, eps, beta, alpha, gamma, delta;
    Combination rule;
};

double smooth_cost(const Problem& p, double e1, double e2, double e3) {
    if (!(e1 > 0 && e2 > 0 && e3 > 0)) return std::numeric_limits<double>::infinity();
    const double arg = 2 * p.M * p.beta / e3;
    if (!(arg > 1)) return std::numeric_limits<double>::infinity();
    return 2 * p.M * (p.alpha / e1) * (p.beta * std::sqrt(p.eps / e2)) *
           (p.gamma * std::log2(arg) + p.delta);
}

ErrorBudget smooth_optimum(const Problem& p) {
    const double lo = std::log(p.eps * 1e-10), hi = std::log(p.eps);
    if (p.rule == Combination::worst_case) {
        // Stationarity of 1/(e1 sqrt(e2)) on e1 + e2 = S gives e1 = 2 e2.
        auto f = [&](double u) {
            const double e3 = std::exp(u), S = p.eps - e3;
            return smooth_cost(p, 2 * S / 3, S / 3, e3);
        };
        constexpr int n = 2000;
        int best = 0;
        double fb = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            const double u = lo + (hi - lo) * i / n;
            const double v = f(u);
            if (v < fb) {
                fb = v;
                best = i;
            }
        }
        const double step = (hi - lo) / n;
        const double u = golden_min(f, lo + (best - 1) * step, std::min(hi - 1e-12, lo + (best + 1) * step));
        const double e3 = std::exp(u), S = p.eps - e3;
        return {p.eps, 2 * S / 3, S / 3, e3, p.rule};
    }
    // variance: e2 = eps - rho, (e1, e3) = rho (cos phi, sin phi); grid in (log rho, log tan phi)
    auto f = [&](double lr, double lt) {
        const double rho = std::exp(lr), tn = std::exp(lt);
        const double c = 1 / std::sqrt(1 + tn * tn);
        return smooth_cost(p, rho * c, p.eps - rho, rho * c * tn);
    };
    double r_lo = lo, r_hi = hi, t_lo = std::log(1e-10), t_hi = std::log(1e4);
    double br = 0, bt = 0;
    for (int round = 0; round < 6; ++round) {
        constexpr int n = 200;
        double fb = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) {
                const double lr = r_lo + (r_hi - r_lo) * i / n;
                const double lt = t_lo + (t_hi - t_lo) * j / n;
                if (lr >= hi) continue;
                const double v = f(lr, lt);
                if (v < fb) {
                    fb = v;
                    br = lr;
                    bt = lt;
                }
            }
        const double wr = 2 * (r_hi - r_lo) / n, wt = 2 * (t_hi - t_lo) / n;
        r_lo = br - wr;
        r_hi = std::min(hi - 1e-12, br + wr);
        t_lo = bt - wt;
        t_hi = bt + wt;
    }
    const double rho = std::exp(br), tn = std::exp(bt), c = 1 / std::sqrt(1 + tn * tn);
    return {p.eps, rho * c, p.eps - rho, rho * c * tn, p.rule};
}

// Budget that realizes integer (k, s) exactly and leaves the most for eps3.
std::optional<ErrorBudget> integer_budget(const Problem& p, double k, double s) {
    double e1 = p.alpha / k;
    while (std::ceil(p.alpha / e1) > k) e1 = std::nextafter(e1, std::numeric_limits<double>::infinity());
    double e2 = p.eps * (p.beta / s) * (p.beta / s);
    while (std::ceil(p.beta * std::sqrt(p.eps / e2)) > s)
        e2 = std::nextafter(e2, std::numeric_limits<double>::infinity());
    double e3;
    if (p.rule == Combination::worst_case) {
        e3 = p.eps - e1 - e2;
    } else {
        const double r = p.eps - e2;
        if (!(r > e1)) return std::nullopt;
        e3 = std::sqrt((r - e1) * (r + e1));
    }
    if (!(e3 > 0)) return std::nullopt;
    ErrorBudget b{p.eps, e1, e2, e3, p.rule};
    // the rounding excess is on the scale of ulp(eps), far above ulp(e3) when e3 is tiny
    const double nudge = std::numeric_limits<double>::epsilon() * p.eps;
    while (b.combined() > p.eps && b.epsilon3_synth > 0)
        b.epsilon3_synth -= std::max(nudge, std::numeric_limits<double>::epsilon() * b.epsilon3_synth);
    if (!(b.epsilon3_synth > 0)) return std::nullopt;
    if (!(2 * p.M * s / b.epsilon3_synth > 1)) return std::nullopt;
    return b;
}

double exact_cost(const Problem& p, const ErrorBudget& b) {
    return cost_function(p.M, b, p.beta, p.alpha, p.gamma, p.delta);
}

struct Candidate {
    double cost = std::numeric_limits<double>::infinity();
    ErrorBudget budget;
};

// Best pe repetition count k for a fixed step count s.
Candidate best_for_steps(const Problem& p, double s) {
    const double e2 = p.eps * (p.beta / s) * (p.beta / s);
    const double room = p.eps - e2;
    if (!(room > 0)) return {};
    auto eval = [&](double k) -> double {
        auto b = integer_budget(p, k, s);
        return b ? exact_cost(p, *b) : std::numeric_limits<double>::infinity();
    };
    double k0 = std::floor(p.alpha / room) + 1;
    while (!std::isfinite(eval(k0))) k0 += std::max(1.0, std::floor(k0 * 1e-3));
    // bracket the minimum by doubling, then integer ternary search
    double lo = k0, hi = k0;
    double fhi = eval(hi);
    while (true) {
        const double nk = hi * 2;
        const double fn = eval(nk);
        if (!(fn < fhi)) {
            hi = nk;
            break;
        }
        lo = hi;
        hi = nk;
        fhi = fn;
    }
    lo = std::max(k0, lo / 2);
    while (hi - lo > 4) {
        const double m1 = std::floor(lo + (hi - lo) / 3), m2 = std::floor(hi - (hi - lo) / 3);
        if (eval(m1) < eval(m2)) hi = m2; else lo = m1;
    }
    Candidate c;
    for (double k = std::max(k0, lo - 8); k <= hi + 8; ++k) {
        auto b = integer_budget(p, k, s);
        if (!b) continue;
        const double v = exact_cost(p, *b);
        if (v < c.cost) {
            c.cost = v;
            c.budget = *b;
        }
    }
    return c;
}

}  // namespace

OptimizationResult optimize_budget_detailed(double M, double epsilon_total, double beta,
                                            const PhaseEstimationModel& pe,
                                            const SynthesisModel& synth, Combination combination) {
    if (!(epsilon_total > 0)) throw ValidationError("epsilon_total must be > 0");
    if (!(M >= 1)) throw ValidationError("M must be >= 1");
    if (!(beta >= 1)) throw ValidationError("beta must be >= 1");
    pe.validate();
    const Problem p{M, epsilon_total, beta, pe.alpha, synth.gamma, synth.delta, combination};

    OptimizationResult out;
    out.smooth_budget = smooth_optimum(p);
    out.smooth_cost = smooth_cost(p, out.smooth_budget.epsilon1_pe, out.smooth_budget.epsilon2_trotter,
                                  out.smooth_budget.epsilon3_synth);
    out.smooth_budget_exact_cost = exact_cost(p, out.smooth_budget);

    // Exact polish over integer steps s around the surrogate optimum.
    const double s_star = std::ceil(beta * std::sqrt(epsilon_total / out.smooth_budget.epsilon2_trotter));
    const double s_min = std::floor(beta) + 1;
    const double s_lo = std::max(s_min, std::floor(s_star / 4));
    const double s_hi = std::max(s_lo + 1, std::ceil(s_star * 4));
    Candidate best;
    auto consider = [&](double s) {
        auto c = best_for_steps(p, s);
        if (c.cost < best.cost) best = c;
        return c.cost;
    };
    if (s_hi - s_lo <= 20000) {
        for (double s = s_lo; s <= s_hi; ++s) consider(s);
    } else {
        double a = s_lo, b = s_hi;
        while (b - a > 64) {
            const double m1 = std::floor(a + (b - a) / 3), m2 = std::floor(b - (b - a) / 3);
            if (consider(m1) < consider(m2)) b = m2; else a = m1;
        }
        for (double s = a; s <= b; ++s) consider(s);
    }
    if (!std::isfinite(best.cost)) throw ValidationError("no feasible budget found");
    out.budget = best.budget;
    out.cost = best.cost;
    return out;
}

ErrorBudget optimize_budget(double M, double epsilon_total, double beta,
                            const PhaseEstimationModel& pe, const SynthesisModel& synth,
                            Combination combination) {
    return optimize_budget_detailed(M, epsilon_total, beta, pe, synth, combination).budget;
}

std::uint64_t logical_qubit_count(int n_spin_orbitals, Strategy strategy, double parallelism,
                                  std::uint64_t par_ancillas) {
    if (n_spin_orbitals < 0) throw ValidationError("n_spin_orbitals must be >= 0");
    const auto n = static_cast<std::uint64_t>(n_spin_orbitals);
    switch (strategy) {
        case Strategy::serial: return n + 3;
        case Strategy::nesting:
            if (!(parallelism >= 1)) throw ValidationError("nesting needs parallelism >= 1");
            return n + 3 + static_cast<std::uint64_t>(std::ceil(parallelism));
        case Strategy::par: return n + 2 + par_ancillas;
    }
    return 0;
}

LogicalCostReport strategy_report(const LogicalCostReport& base, Strategy strategy,
                                  const StrategyParams& params) {
    LogicalCostReport r = base;
    r.strategy = strategy;
    r.n_spin_orbitals = params.n_spin_orbitals;
    const double L = base.log2_inverse_synthesis_error;
    const double t = base.t_gate_seconds;
    const auto det = SynthesisModel::deterministic_worst_case();
    auto set_synth = [&](const SynthesisModel& s) {
        r.synthesis_name = s.name;
        r.gamma = s.gamma;
        r.delta = s.delta;
        r.t_per_rotation = s.t_per_rotation(L);
        r.synthesis_above_lower_bound = r.t_per_rotation >= synthesis_lower_bound(L);
    };
    r.parallelism = 1.0;
    r.par_levels = 0;
    r.par_synthesis_cost = 0;
    r.rotation_factories = 0;
    switch (strategy) {
        case Strategy::serial:
            set_synth(SynthesisModel::fallback_average());
            r.t_count = r.rotation_count * r.t_per_rotation;
            r.wall_time = r.t_count * t;
            r.logical_qubits = logical_qubit_count(params.n_spin_orbitals, strategy, 1.0, 0);
            break;
        case Strategy::nesting:
            if (!(params.parallelism >= 1)) throw ValidationError("nesting needs parallelism >= 1");
            set_synth(det);
            r.parallelism = params.parallelism;
            r.t_count = r.rotation_count * r.t_per_rotation;
            r.wall_time = r.t_count * t / params.parallelism;
            r.logical_qubits =
                logical_qubit_count(params.n_spin_orbitals, strategy, params.parallelism, 0);
            r.rotation_factories = static_cast<std::uint64_t>(std::floor(params.parallelism));
            break;
        case Strategy::par: {
            if (params.par_levels < 1) throw ValidationError("PAR needs n >= 1");
            set_synth(det);
            const std::uint64_t c = params.par_synthesis_cost
                                        ? params.par_synthesis_cost
                                        : static_cast<std::uint64_t>(std::ceil(det.t_per_rotation(L)));
            r.par_levels = params.par_levels;
            r.par_synthesis_cost = c;
            r.t_per_rotation = static_cast<double>(params.par_levels * c);
            r.t_count = r.rotation_count * r.t_per_rotation;
            const parallel::ParParams pp{params.par_levels, 1, c};
            r.wall_time = r.rotation_count * parallel::par_factory_time_per_rotation(pp) * t;
            r.rotation_factories = parallel::par_rotation_factories(pp);
            r.logical_qubits =
                logical_qubit_count(params.n_spin_orbitals, strategy, 1.0, r.rotation_factories);
            break;
        }
    }
    if (params.clifford_per_step) {
        r.clifford_count = *params.clifford_per_step * static_cast<double>(r.trotter_steps_per_unit_time) *
                           static_cast<double>(r.pe_repetitions);
        r.clifford_from_ratio = false;
    } else {
        r.clifford_count = (strategy == Strategy::par ? kCliffordPerTPar : kCliffordPerT) * r.t_count;
        r.clifford_from_ratio = true;
    }
    return r;
}

}  // namespace qre::cost

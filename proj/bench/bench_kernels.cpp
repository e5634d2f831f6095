// Serial reference vs OpenMP path for each parallel kernel. Run with
// OMP_NUM_THREADS set to compare; both paths return identical results.

#include <string>

#include <benchmark/benchmark.h>

#include "qre/integrals.hpp"
#include "qre/parallel.hpp"
#include "qre/terms.hpp"
#include "qre/trotter_bound.hpp"

namespace {

using qre::Execution;

const qre::hamiltonian::TermList& terms(const std::string& name) {
    static const auto h4 = qre::hamiltonian::enumerate_terms(
        qre::hamiltonian::read_fcidump(std::string(QRE_BENCH_DATA) + "/molecules/h4_chain_sto3g.fcidump"));
    static const auto h2o = qre::hamiltonian::enumerate_terms(
        qre::hamiltonian::read_fcidump(std::string(QRE_BENCH_DATA) + "/molecules/h2o_sto3g.fcidump"));
    return name == "h4" ? h4 : h2o;
}

Execution exec(const benchmark::State& s) { return s.range(0) ? Execution::parallel : Execution::serial; }

void BM_Exhaustive(benchmark::State& state) {
    const auto& t = terms("h4");
    for (auto _ : state) benchmark::DoNotOptimize(qre::trotter::exhaustive_error_constant(t, exec(state)).h_bound);
    state.SetLabel(state.range(0) ? "openmp" : "serial");
}
BENCHMARK(BM_Exhaustive)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Stratified(benchmark::State& state) {
    const auto& t = terms("h2o");
    for (auto _ : state)
        benchmark::DoNotOptimize(qre::trotter::estimate_error_constant(t, 20'000, 3, exec(state)).h_bound);
    state.SetLabel(state.range(0) ? "openmp" : "serial");
}
BENCHMARK(BM_Stratified)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ParMonteCarlo(benchmark::State& state) {
    const qre::parallel::ParParams p{9, 100, 199};
    for (auto _ : state)
        benchmark::DoNotOptimize(qre::parallel::simulate_par_rotations(p, 1'000'000, 5, exec(state)).mean);
    state.SetLabel(state.range(0) ? "openmp" : "serial");
}
BENCHMARK(BM_ParMonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

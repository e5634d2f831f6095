// Command-line front end. Every subcommand prints JSON unless a report format says otherwise.
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qre/clifford.hpp"
#include "qre/cost_model.hpp"
#include "qre/error.hpp"
#include "qre/fault_tolerance.hpp"
#include "qre/integrals.hpp"
#include "qre/oracle.hpp"
#include "qre/parallel.hpp"
#include "qre/presets.hpp"
#include "qre/report.hpp"
#include "qre/terms.hpp"
#include "qre/trotter_bound.hpp"

namespace {

using nlohmann::json;
using namespace qre;

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitValidation = 2;
constexpr int kExitStrict = 3;

template <class T>
json tag(T v, const char* prov) {
    return json{{"value", v}, {"provenance", prov}};
}

struct TermSource {
    std::string fcidump;
    std::string terms;
    double threshold = hamiltonian::kDefaultDropThreshold;

    void add(CLI::App* app) {
        auto* f = app->add_option("--fcidump", fcidump, "FCIDUMP integral file");
        auto* t = app->add_option("--terms", terms, "term list written by 'ingest -o'");
        f->excludes(t);
        app->add_option("--threshold", threshold, "drop |coefficient| <= threshold");
    }

    hamiltonian::TermList load() const {
        if (!fcidump.empty()) return hamiltonian::enumerate_terms(hamiltonian::read_fcidump(fcidump), threshold);
        if (!terms.empty()) {
            std::ifstream in(terms);
            if (!in) throw ValidationError("cannot open term list '" + terms + "'");
            return hamiltonian::read_term_list(in);
        }
        throw ValidationError("need --fcidump or --terms");
    }
};

// Direct cost-model inputs shared by 'logical' and 'physical'.
struct CostInputs {
    std::string preset;
    std::string trotter_case = "rescaled";
    std::optional<double> M;
    std::optional<double> beta;
    std::optional<int> n_so;
    double epsilon = 1e-4;
    std::optional<std::string> pe;
    std::optional<std::string> synthesis;
    std::string combination = "worst";
    std::string strategy = "serial";
    std::optional<double> parallelism;
    std::optional<std::uint64_t> par_n;
    std::optional<std::uint64_t> par_c;
    double t_gate = cost::kDefaultTGateSeconds;

    void add(CLI::App* app) {
        app->add_option("--preset", preset, "struct1, struct2, or a preset JSON path");
        app->add_option("--case", trotter_case, "Trotter case: rigorous, pessimistic, rescaled, optimistic");
        app->add_option("--m,--M", M, "number of Hamiltonian terms");
        app->add_option("--beta", beta, "Trotter number at --epsilon");
        app->add_option("--n-so", n_so, "spin orbitals");
        app->add_option("--epsilon", epsilon, "total energy error (Ha)");
        app->add_option("--pe", pe, "phase estimation: standard, rfpe, optimal");
        app->add_option("--synthesis", synthesis, "deterministic or fallback");
        app->add_option("--combination", combination, "worst or variance");
        app->add_option("--strategy", strategy, "serial, nesting, par");
        app->add_option("--parallelism", parallelism, "nesting parallelism");
        app->add_option("--par-n", par_n, "PAR cached levels n");
        app->add_option("--par-c", par_c, "PAR deterministic synthesis cost C (0 = from L)");
        app->add_option("--t-gate", t_gate, "T gate time (s)");
    }

    cost::LogicalCostReport run(json& extra) const {
        std::optional<presets::StructurePreset> p;
        std::optional<presets::CasePreset> c;
        if (!preset.empty()) {
            p = presets::resolve_preset(preset);
            auto it = p->cases.find(trotter::trotter_case_from_string(trotter_case));
            if (it == p->cases.end()) throw ValidationError("preset lacks case '" + trotter_case + "'");
            c = it->second;
        }
        const double m = M ? *M : p ? p->M : throw ValidationError("need --M or --preset");
        double b;
        if (beta) {
            b = *beta;
        } else if (c) {
            b = std::abs(epsilon - p->reference_epsilon) <= 1e-12 * epsilon
                    ? c->beta
                    : static_cast<double>(trotter::tolerant_ceil(c->beta * std::sqrt(p->reference_epsilon / epsilon)));
        } else {
            throw ValidationError("need --beta or --preset");
        }
        const int n = n_so ? *n_so : p ? p->n_spin_orbitals : 0;
        const auto pem = pe ? cost::PhaseEstimationModel::from_name(*pe)
                            : c ? c->pe : cost::PhaseEstimationModel::optimal_surrogate();
        const auto syn = synthesis ? cost::SynthesisModel::from_name(*synthesis)
                                   : c ? c->synthesis : cost::SynthesisModel::fallback_average();
        const auto comb = cost::combination_from_string(combination);
        const auto opt = cost::optimize_budget_detailed(m, epsilon, b, pem, syn, comb);
        const auto base = cost::evaluate_cost(m, opt.budget, b, pem, syn, t_gate);
        cost::StrategyParams sp;
        sp.n_spin_orbitals = n;
        sp.parallelism = parallelism ? *parallelism : p ? p->nesting_parallelism : 1.0;
        sp.par_levels = par_n ? *par_n : p ? p->par_levels : 9;
        sp.par_synthesis_cost = par_c ? *par_c : p ? p->par_synthesis_cost : 0;
        extra["smooth_cost"] = tag(opt.smooth_cost, "computed");
        extra["smooth_budget_exact_cost"] = tag(opt.smooth_budget_exact_cost, "computed");
        return cost::strategy_report(base, cost::strategy_from_string(strategy), sp);
    }
};

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum chemistry resource estimator"};
    app.set_config("--config", "", "key-value config file; command-line flags take precedence");
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "parse an FCIDUMP and enumerate Hamiltonian terms");
    std::string ingest_path, ingest_out;
    double ingest_threshold = hamiltonian::kDefaultDropThreshold;
    ingest->add_option("fcidump", ingest_path, "FCIDUMP file")->required();
    ingest->add_option("-o,--out", ingest_out, "write the term list here");
    ingest->add_option("--threshold", ingest_threshold, "drop |coefficient| <= threshold");

    // trotter-bound
    auto* tb = app.add_subcommand("trotter-bound", "estimate the Trotter error constant h");
    TermSource tb_src;
    tb_src.add(tb);
    std::uint64_t tb_samples = trotter::kTestSamplesPerClass, tb_seed = 1;
    bool tb_exhaustive = false, tb_serial = false;
    std::optional<double> tb_eps2;
    tb->add_option("--samples-per-class,--samples", tb_samples, "samples per class triple");
    tb->add_option("--seed", tb_seed, "RNG seed");
    tb->add_flag("--exhaustive", tb_exhaustive, "sum all L^3 triples");
    tb->add_flag("--serial", tb_serial, "disable OpenMP kernels");
    tb->add_option("--epsilon2", tb_eps2, "also report the Trotter number for this error");

    // oracle-validate
    auto* ov = app.add_subcommand("oracle-validate", "compare the bound with exact Strang-splitting errors");
    TermSource ov_src;
    ov_src.add(ov);
    int ov_points = 20;
    double ov_tmin = 1e-4, ov_tmax = 1e-1;
    bool ov_strict = false;
    ov->add_option("--points", ov_points, "log-spaced time steps");
    ov->add_option("--tmin", ov_tmin, "smallest time step (1/Ha)");
    ov->add_option("--tmax", ov_tmax, "largest time step (1/Ha)");
    ov->add_flag("--strict", ov_strict, "exit 3 if any point violates the bound");

    // logical
    auto* lg = app.add_subcommand("logical", "optimize the error budget and report logical costs");
    CostInputs lg_in;
    lg_in.add(lg);

    // par
    auto* par = app.add_subcommand("par", "PAR closed forms, optionally checked by Monte Carlo");
    parallel::ParParams pp{9, 1, 199};
    std::uint64_t par_trials = 0, par_seed = 1;
    par->add_option("--n", pp.n_levels, "cached levels");
    par->add_option("--m,--M", pp.rotations_cached, "rotations served per cache");
    par->add_option("--c,--C", pp.synthesis_cost, "deterministic synthesis T count");
    par->add_option("--trials", par_trials, "Monte Carlo trials (0 = skip)");
    par->add_option("--seed", par_seed, "RNG seed");

    // nesting
    auto* nest = app.add_subcommand("nesting", "greedy nesting parallelism of a term list");
    TermSource nest_src;
    nest_src.add(nest);

    // physical
    auto* ph = app.add_subcommand("physical", "physical qubit overheads for one strategy");
    CostInputs ph_in;
    ph_in.add(ph);
    std::vector<double> ph_rates{1e-3, 1e-6, 1e-9};
    std::string ph_ft = "standard";
    double ph_inject = 1e-4;
    ph->add_option("--p,--error-rates", ph_rates, "physical error rates");
    ph->add_option("--scenario,--ft", ph_ft, "standard or topological");
    ph->add_option("--inject,--p-inject", ph_inject, "injection error for the topological scenario");

    // report
    auto* rp = app.add_subcommand("report", "full pipeline with table-style output");
    report::Scenario sc;
    std::string rp_preset = "struct1", rp_case = "rescaled", rp_fcidump, rp_format = "markdown", rp_out;
    std::optional<double> rp_M, rp_beta;
    std::optional<int> rp_nso;
    std::vector<std::string> rp_strategies{"serial", "nesting", "par"};
    std::optional<std::string> rp_pe;
    std::string rp_comb = "worst";
    bool rp_strict = false;
    rp->add_option("--preset", rp_preset, "struct1, struct2, or a preset JSON path");
    rp->add_option("--case", rp_case, "Trotter case");
    rp->add_option("--fcidump", rp_fcidump, "run from integrals instead of a preset");
    rp->add_option("--m,--M", rp_M, "override term count");
    rp->add_option("--beta", rp_beta, "override Trotter number at the reference epsilon");
    rp->add_option("--n-so", rp_nso, "override spin orbitals");
    rp->add_option("--epsilon", sc.epsilon_targets, "energy targets (Ha)");
    rp->add_option("--strategies", rp_strategies, "subset of serial nesting par");
    rp->add_option("--p,--error-rates", sc.error_rates, "physical error rates");
    rp->add_option("--scenario,--ft", sc.ft_scenario, "standard or topological");
    rp->add_option("--inject,--p-inject", sc.p_inject, "topological injection error");
    rp->add_option("--pe", rp_pe, "phase estimation model");
    rp->add_option("--combination", rp_comb, "worst or variance");
    rp->add_option("--seed", sc.seed, "RNG seed");
    rp->add_option("--samples-per-class,--samples", sc.samples_per_class, "samples per class triple (fcidump input)");
    rp->add_option("--t-gate", sc.t_gate_seconds, "T gate time (s)");
    rp->add_option("--parallelism", sc.parallelism, "override nesting parallelism");
    rp->add_option("--par-n", sc.par_levels, "override PAR levels");
    rp->add_option("--par-c", sc.par_synthesis_cost, "override PAR synthesis cost");
    rp->add_option("--format", rp_format, "json or markdown");
    rp->add_option("-o,--out", rp_out, "write the report here instead of stdout");
    rp->add_flag("--strict", rp_strict, "exit 3 if any published-value comparison is out of tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*ingest) {
            const auto table = hamiltonian::read_fcidump(ingest_path);
            const auto terms = hamiltonian::enumerate_terms(table, ingest_threshold);
            json counts;
            const auto cc = terms.class_counts();
            for (int k = 0; k < hamiltonian::kTermClassCount; ++k)
                counts[std::string(hamiltonian::to_string(static_cast<hamiltonian::TermClass>(k)))] =
                    tag(cc[k], "computed");
            json j{{"source", table.source_label},
                   {"n_spatial", tag(table.n_spatial, "input")},
                   {"n_spin_orbitals", tag(terms.n_spin_orbitals, "computed")},
                   {"n_electrons", tag(table.n_electrons, "input")},
                   {"constant", tag(terms.constant, "input")},
                   {"M", tag(terms.M(), "computed")},
                   {"unmerged_count", tag(terms.unmerged_count(), "computed")},
                   {"class_counts", counts}};
            if (!terms.terms.empty())
                j["clifford_per_step"] = tag(hamiltonian::clifford_count_per_step(terms), "computed");
            if (!ingest_out.empty()) {
                std::ofstream out(ingest_out);
                if (!out) throw ValidationError("cannot write '" + ingest_out + "'");
                hamiltonian::write_term_list(out, terms);
            }
            print(j);
        } else if (*tb) {
            const auto terms = tb_src.load();
            const auto exec = tb_serial ? Execution::serial : Execution::parallel;
            const auto est = tb_exhaustive ? trotter::exhaustive_error_constant(terms, exec)
                                           : trotter::estimate_error_constant(terms, tb_samples, tb_seed, exec);
            json j = report::to_json(est);
            j["M"] = tag(terms.M(), "computed");
            if (tb_eps2) j["trotter_number"] = tag(trotter::trotter_number(est.h_bound, *tb_eps2), "computed");
            print(j);
        } else if (*ov) {
            const auto terms = ov_src.load();
            if (terms.n_electrons < 0) throw ValidationError("oracle needs the electron count (use --fcidump)");
            if (ov_points < 2 || !(ov_tmin > 0) || !(ov_tmax > ov_tmin))
                throw ValidationError("need points >= 2 and 0 < tmin < tmax");
            const auto est = trotter::exhaustive_error_constant(terms);
            const oracle::StrangOracle orc(terms, oracle::hartree_fock_sector(terms.n_electrons));
            const auto hf = oracle::hartree_fock_overlap(terms, terms.n_electrons);
            json pts = json::array();
            int violations = 0;
            for (int k = 0; k < ov_points; ++k) {
                const double t = ov_tmin * std::pow(ov_tmax / ov_tmin, double(k) / (ov_points - 1));
                const auto r = orc.at(t);
                const double bound = est.h_bound * t * t;
                const bool ok = bound >= r.delta_e;
                violations += !ok;
                pts.push_back(json{{"t", tag(t, "input")},
                                   {"exact_error", tag(r.delta_e, "computed")},
                                   {"bound", tag(bound, "computed")},
                                   {"phase_wrapped", r.phase_wrapped},
                                   {"ok", ok}});
            }
            print(json{{"e_fci", tag(orc.ground().energy + orc.constant(), "computed")},
                       {"hartree_fock_overlap", tag(hf.overlap, "computed")},
                       {"h_bound", tag(est.h_bound, "computed")},
                       {"points", pts},
                       {"violations", tag(violations, "computed")}});
            if (ov_strict && violations) return kExitStrict;
        } else if (*lg) {
            json extra;
            const auto r = lg_in.run(extra);
            json j = report::to_json(r);
            j.update(extra);
            print(j);
        } else if (*par) {
            pp.validate();
            json j{{"n", tag(pp.n_levels, "input")},
                   {"M", tag(pp.rotations_cached, "input")},
                   {"C", tag(pp.synthesis_cost, "input")},
                   {"expected_rotations", tag(parallel::par_expected_rotations(pp), "computed")},
                   {"factory_time_per_rotation", tag(parallel::par_factory_time_per_rotation(pp), "computed")},
                   {"factory_time_no_feed_forward", tag(parallel::par_factory_time_no_feed_forward(pp), "computed")},
                   {"rotation_factories", tag(parallel::par_rotation_factories(pp), "computed")},
                   {"rotation_factories_nC", tag(parallel::par_rotation_factories_nc(pp), "computed")}};
            if (par_trials) {
                const auto a = parallel::simulate_par_rotations(pp, par_trials, par_seed);
                const auto b = parallel::simulate_par_factory_time(pp, par_trials, par_seed);
                j["monte_carlo"] = json{{"trials", tag(par_trials, "input")},
                                        {"seed", tag(par_seed, "input")},
                                        {"rotations_mean", tag(a.mean, "computed")},
                                        {"rotations_std_error", tag(a.std_error, "computed")},
                                        {"factory_time_mean", tag(b.mean, "computed")},
                                        {"factory_time_std_error", tag(b.std_error, "computed")}};
            }
            print(j);
        } else if (*nest) {
            const auto terms = nest_src.load();
            print(json{{"M", tag(terms.M(), "computed")},
                       {"nesting_parallelism", tag(parallel::nesting_parallelism(terms), "computed")}});
        } else if (*ph) {
            json extra;
            const auto r = ph_in.run(extra);
            json out{{"logical", report::to_json(r)}, {"physical", json::array()}};
            out["logical"].update(extra);
            for (double p : ph_rates) {
                const auto params = ph_ft == "topological" ? ft::topological_params(p, ph_inject)
                                  : ph_ft == "standard"      ? ft::standard_params(p)
                                                           : throw ValidationError("--ft must be standard or topological");
                out["physical"].push_back(report::to_json(ft::physical_report(r, params)));
            }
            print(out);
        } else if (*rp) {
            if (!rp_fcidump.empty()) {
                sc.input = report::FcidumpInput{rp_fcidump};
            } else {
                report::DirectInput d;
                d.preset = rp_preset;
                d.beta_case = trotter::trotter_case_from_string(rp_case);
                d.M = rp_M;
                d.beta = rp_beta;
                d.n_spin_orbitals = rp_nso;
                sc.input = d;
            }
            sc.strategies.clear();
            for (const auto& s : rp_strategies) sc.strategies.push_back(cost::strategy_from_string(s));
            sc.pe_model = rp_pe;
            sc.combination = cost::combination_from_string(rp_comb);
            const auto fmt = report::format_from_string(rp_format);
            const auto bundle = report::run_scenario(sc);
            const auto text = report::emit(bundle, fmt);
            if (rp_out.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(rp_out, std::ios::binary);
                if (!out) throw ValidationError("cannot write '" + rp_out + "'");
                out << text;
            }
            if (rp_strict && !bundle.all_comparisons_pass()) return kExitStrict;
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOther;
    }
    return kExitOk;
}

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qre/cost_model.hpp"
#include "qre/trotter_bound.hpp"

namespace qre::presets {

struct CasePreset {
    cost::PhaseEstimationModel pe;
    double beta = 0.0;  // Trotter number at the reference epsilon
    cost::SynthesisModel synthesis;
};

// Published logical-cost row, kept for comparisons.
struct ReferenceRow {
    double epsilon = 0.0;
    cost::Strategy strategy = cost::Strategy::serial;
    double t_count = 0.0;
    double clifford = 0.0;
    double time_s = 0.0;
    std::uint64_t logical_qubits = 0;
};

struct StructurePreset {
    int schema_version = 0;
    std::string name;
    std::string path;
    double M = 0.0;
    int n_spatial = 0;
    int n_spin_orbitals = 0;
    double nesting_parallelism = 1.0;
    std::uint64_t par_levels = 0;
    std::uint64_t par_synthesis_cost = 0;
    double reference_epsilon = 1e-4;
    std::map<trotter::TrotterCase, CasePreset> cases;
    std::vector<ReferenceRow> published_rows;

    const ReferenceRow* reference(double epsilon, cost::Strategy s) const;
};

StructurePreset load_preset(const std::string& path);

// "struct1" / "struct2" (or 1 / 2) resolve to the shipped data files.
StructurePreset builtin_preset(int structure);
StructurePreset resolve_preset(const std::string& name_or_path);

std::string data_dir();

}  // namespace qre::presets

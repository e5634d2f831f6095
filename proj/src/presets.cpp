#include "qre/presets.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "qre/error.hpp"

namespace qre::presets {

std::string data_dir() {
    if (const char* env = std::getenv("QRE_DATA_DIR")) return env;
    return QRE_DATA_DIR;
}

const ReferenceRow* StructurePreset::reference(double epsilon, cost::Strategy s) const {
    for (const auto& r : published_rows)
        if (r.strategy == s && std::abs(r.epsilon - epsilon) <= 1e-12 * epsilon) return &r;
    return nullptr;
}

StructurePreset load_preset(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot open preset '" + path + "'");
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("preset '" + path + "': " + e.what());
    }
    try {
        StructurePreset p;
        p.path = path;
        p.schema_version = j.at("schema_version").get<int>();
        if (p.schema_version != 1)
            throw ValidationError("preset '" + path + "': unsupported schema_version");
        p.name = j.at("name").get<std::string>();
        p.M = j.at("M").get<double>();
        p.n_spatial = j.at("n_spatial").get<int>();
        p.n_spin_orbitals = j.at("n_spin_orbitals").get<int>();
        p.nesting_parallelism = j.at("nesting_parallelism").get<double>();
        p.par_levels = j.at("par").at("n_levels").get<std::uint64_t>();
        p.par_synthesis_cost = j.at("par").at("synthesis_cost").get<std::uint64_t>();
        p.reference_epsilon = j.value("reference_epsilon", 1e-4);
        for (const auto& [k, v] : j.at("trotter_cases").items()) {
            CasePreset c;
            c.pe = cost::PhaseEstimationModel::from_name(v.at("pe").get<std::string>());
            c.beta = v.at("beta").get<double>();
            c.synthesis = cost::SynthesisModel::from_name(v.at("synthesis").get<std::string>());
            p.cases[trotter::trotter_case_from_string(k)] = c;
        }
        for (const auto& r : j.value("published_rows", nlohmann::json::array())) {
            ReferenceRow row;
            row.epsilon = r.at("epsilon").get<double>();
            row.strategy = cost::strategy_from_string(r.at("strategy").get<std::string>());
            row.t_count = r.at("t_count").get<double>();
            row.clifford = r.at("clifford").get<double>();
            row.time_s = r.at("time_s").get<double>();
            row.logical_qubits = r.at("logical_qubits").get<std::uint64_t>();
            p.published_rows.push_back(row);
        }
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("preset '" + path + "': " + e.what());
    }
}

StructurePreset builtin_preset(int structure) {
    if (structure != 1 && structure != 2) throw ValidationError("structure must be 1 or 2");
    return load_preset(data_dir() + "/presets/femoco_struct" + std::to_string(structure) + ".json");
}

StructurePreset resolve_preset(const std::string& s) {
    if (s == "struct1" || s == "1") return builtin_preset(1);
    if (s == "struct2" || s == "2") return builtin_preset(2);
    return load_preset(s);
}

}  // namespace qre::presets

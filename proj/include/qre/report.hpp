#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qre/cost_model.hpp"
#include "qre/fault_tolerance.hpp"
#include "qre/trotter_bound.hpp"

namespace qre::report {

// published = constant taken from the literature, calibrated = fitted to published tables,
// computed = produced by this pipeline, input = supplied by the user.
enum class Provenance { published, calibrated, computed, input };
std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

struct Tagged {
    double value = 0.0;
    Provenance provenance = Provenance::computed;
};

struct DirectInput {
    std::string preset = "struct1";
    trotter::TrotterCase beta_case = trotter::TrotterCase::rescaled;
    std::optional<double> M;
    std::optional<double> beta;  // at the preset's reference epsilon
    std::optional<int> n_spin_orbitals;
};

struct FcidumpInput {
    std::string path;
    double drop_threshold = 1e-10;
};

struct Scenario {
    std::variant<DirectInput, FcidumpInput> input = DirectInput{};
    std::vector<double> epsilon_targets{1e-4, 1e-3};
    std::vector<cost::Strategy> strategies{cost::Strategy::serial, cost::Strategy::nesting,
                                           cost::Strategy::par};
    std::vector<double> error_rates{1e-3, 1e-6, 1e-9};
    std::string ft_scenario = "standard";  // or "topological"
    double p_inject = 1e-4;              // topological only
    std::optional<std::string> pe_model;
    cost::Combination combination = cost::Combination::worst_case;
    std::uint64_t seed = 1;
    std::uint64_t samples_per_class = trotter::kTestSamplesPerClass;
    double t_gate_seconds = cost::kDefaultTGateSeconds;
    std::optional<double> parallelism;
    std::optional<std::uint64_t> par_levels;
    std::optional<std::uint64_t> par_synthesis_cost;

    void validate() const;
};

struct Comparison {
    std::string name;
    double computed = 0.0;
    double reference = 0.0;
    double tolerance = 0.0;  // allowed factor (ratio in [1/tol, tol]) or absolute slack
    bool absolute = false;
    bool pass = false;
};

struct NamedConstant {
    std::string name;
    Tagged value;
};

struct ResultEntry {
    std::string label;
    double epsilon = 0.0;
    cost::LogicalCostReport logical;
    double smooth_cost = 0.0;               // surrogate optimum value
    double smooth_budget_exact_cost = 0.0;  // exact cost at the surrogate optimum
    std::vector<ft::PhysicalCostReport> physical;
    std::map<std::string, Provenance> provenance;  // input-field origins that differ from the defaults
};

struct ReportBundle {
    std::string title;
    nlohmann::json scenario;  // echo of the resolved inputs
    std::vector<NamedConstant> constants;
    std::vector<ResultEntry> results;
    std::vector<Comparison> comparisons;
    std::vector<std::string> warnings;

    bool all_comparisons_pass() const;
};

ReportBundle run_scenario(const Scenario& s);

enum class Format { json, markdown };
Format format_from_string(std::string_view s);

std::string emit(const ReportBundle& bundle, Format format);

nlohmann::json to_json(const ReportBundle& bundle);
ReportBundle bundle_from_json(const nlohmann::json& j);

// JSON fragments shared with the CLI.
nlohmann::json to_json(const cost::LogicalCostReport& r);
nlohmann::json to_json(const ft::PhysicalCostReport& r);
nlohmann::json to_json(const trotter::TrotterErrorEstimate& e);
cost::LogicalCostReport logical_from_json(const nlohmann::json& j);
ft::PhysicalCostReport physical_from_json(const nlohmann::json& j);

std::string format_duration(double seconds);
std::string strategy_label(cost::Strategy s);

}  // namespace qre::report

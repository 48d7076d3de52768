#pragma once
// Scenario configuration (JSON), the run and sweep pipelines, and the
// model catalogue behind `list-models`.

#include "adiabat/hamiltonian.hpp"
#include "adiabat/report.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace adiabat::lab {

using report::Json;
using num::Complex;

struct ModelSpec {
    std::string name;
    Json params = Json::object(); // defaults filled in; dual_of keeps its base under "base"

    bool operator==(const ModelSpec&) const = default;
};

struct Tolerances {
    double gap = diag::kDefaultGapTolerance;
    double phase_guard = diag::kQuadraturePhaseGuard;
    double max_step_phase = 0.1;
    double cutoff_fraction = diag::kDefaultCutoffFraction;

    bool operator==(const Tolerances&) const = default;
};

struct ScenarioConfig {
    std::string name = "scenario";
    ModelSpec model;
    double total_time = 0.0;
    std::size_t steps = 0;
    std::optional<std::size_t> initial_level = 0;
    std::vector<Complex> initial_amplitudes; // computational basis; used when initial_level is empty
    std::vector<report::Pair> pairs;         // empty: default policy
    std::vector<std::string> diagnostics;    // empty: all sections
    std::vector<double> sweep;
    std::string output_dir = "adiabat-out";
    Tolerances tolerances;
    std::size_t min_time_s_steps = 1000;
    double min_time_multiplier = 10.0;
    std::size_t timeseries_stride = 0; // 0: automatic, at most ~10^4 rows

    bool operator==(const ScenarioConfig&) const = default;
};

Json to_json_model(const ModelSpec& spec);

// Throws Error{InvalidParams} naming the offending key.
ScenarioConfig parse_config(const Json& doc);
ScenarioConfig load_config(const std::filesystem::path& file);
Json to_json(const ScenarioConfig& cfg);

// dual_of uses grid_points = steps + 1 unless given.
ModelPtr build_model(const ModelSpec& spec, double total_time, std::size_t steps);

struct RunOutcome {
    std::vector<std::filesystem::path> files;
    std::vector<Json> reports; // base first for dual_of
};

using Logger = std::function<void(const std::string&)>;

RunOutcome run(const ScenarioConfig& cfg, const std::filesystem::path& output_dir, const Logger& log = {});

struct SweepRow {
    double total_time = 0.0;
    std::size_t steps = 0;
    report::PairSummary summary;
};

struct SweepOutcome {
    std::vector<SweepRow> rows;
    std::optional<double> slope; // log-log slope of max |A| (frozen) vs T, two or more rows
    std::filesystem::path table;
};

// Steps follow T at the configured dt. Entries run concurrently.
SweepOutcome sweep(const ScenarioConfig& cfg, const std::filesystem::path& output_dir, const Logger& log = {});

std::string list_models();

// 0 success, 2 validation, 3 numerical guard, 1 anything else.
int exit_code_for(const std::exception& e);

} // namespace adiabat::lab

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "iaspa/objective.hpp"
#include "iaspa/optimizer.hpp"
#include "iaspa/problem.hpp"
#include "iaspa/propagation.hpp"
#include "iaspa/scene.hpp"

namespace iaspa {

struct PrioritySpec {
    bool uniform = true;
    std::filesystem::path raster_path;  // exchange-format raster when !uniform
};

struct ObjectiveSpec {
    AggMode mode = AggMode::Max;
    WeightFamily family = WeightFamily::Log1p;
    double saturating_c = 1.0;
    std::vector<std::pair<double, double>> table;
    PrioritySpec priority;
};

struct OptimizerSpec {
    bool present = false;
    double epsilon = 0.0;
    std::optional<int> budget;
    std::optional<double> coverage_target;
    std::uint64_t seed = 0;
    std::vector<int> fixed_sites;
    bool lazy = false;
};

/// Parsed scenario document: sections bounds, grid, materials, buildings,
/// candidates, exclusions, priority, objective, optimizer, radio. Lengths in
/// meters, attenuations in dB/m. See README for the field reference.
struct Scenario {
    Scene scene;
    CandidateSpec candidates;
    RadioConfig radio;
    ObjectiveSpec objective;
    OptimizerSpec optimizer;
    std::filesystem::path base_dir;
};

/// Overrides are "section.key=value" strings applied before interpretation.
Scenario parse_scenario(std::istream& in, const std::string& name,
                        const std::filesystem::path& base_dir,
                        const std::vector<std::string>& overrides = {});
Scenario load_scenario(const std::filesystem::path& path,
                       const std::vector<std::string>& overrides = {});

/// Loads and validates just the environment from a scenario file.
Scene load_scene(const std::filesystem::path& path);

/// Wires the scenario into a runnable problem: grid, candidates, fields
/// (cache-backed when given), density, weight bound M, identity hash.
PlacementProblem build_problem(const Scenario& scenario, FieldCache* cache = nullptr,
                               int workers = 0);

/// Maps the optimizer section onto the run configuration (validates that
/// exactly one of budget / coverage_target is set).
OptimizerConfig optimizer_config(const Scenario& scenario, int workers = 0);

}  // namespace iaspa

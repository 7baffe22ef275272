#pragma once

#include "ergoscope/design.hpp"
#include "ergoscope/optimizer.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ergoscope {

struct OutputConfig {
    std::string directory = "out";
    /// Any of "ply", "obj".
    std::vector<std::string> mesh_formats{"ply", "obj"};

    bool operator==(const OutputConfig&) const = default;
};

/// Fully validated run description with every default filled in.
struct RunConfig {
    ManipulatorModel manipulator = master_manipulator();
    DexterityConfig dexterity{};
    double tau = 0.3;
    double isovalue = 0.3;
    std::size_t n_samples = 200000;
    std::uint64_t seed = 1;
    double r = 0.02;
    bool r_auto = false;
    EhemModel ehem{};
    // Operator frame: origin at the left armrest fulcrum, x forward, y to
    // the operator's left, z up.
    double mirror_plane_y = -0.2;
    std::size_t ehem_samples = 500000;
    DualArmLayout layout{Vec3(0.0, -0.2, 0.0), 0.20, 0.5};
    bool binarize = false;
    double interaction_tau = 0.0;
    OptimizationProblem optimize{};
    std::size_t seed_repeats = 1;
    OutputConfig output{};

    /// Design point described by the manipulator's a3, a4 and layout D.
    DesignPoint design() const;
    EvaluationConfig evaluation() const;

    bool operator==(const RunConfig&) const = default;
};

/// Defaults used for fields a config file omits.
RunConfig default_run_config();

/// Parses and validates config text. Throws ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical JSON of the whole config (every field explicit); parse_config
/// of the result reproduces the same RunConfig.
std::string dump_config(const RunConfig& cfg);

/// FNV-1a 64-bit hash of the compact canonical config, as 16 hex digits.
/// output.directory is left out so relocated runs stay byte-identical.
std::string config_hash(const RunConfig& cfg);

}  // namespace ergoscope

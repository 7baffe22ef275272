#pragma once

#include "ergoscope/dexterity.hpp"
#include "ergoscope/ehem.hpp"
#include "ergoscope/interaction.hpp"
#include "ergoscope/kinematics.hpp"
#include "ergoscope/parallel.hpp"
#include "ergoscope/workspace.hpp"

#include <cstdint>
#include <string>

namespace ergoscope {

/// The optimized quantities: link lengths a3, a4 and base separation D (m).
struct DesignPoint {
    double a3 = 0.0;
    double a4 = 0.0;
    double D = 0.0;

    bool operator==(const DesignPoint&) const = default;
};

/// Everything `evaluate_design` needs besides the design point.
struct EvaluationConfig {
    ManipulatorModel manipulator = master_manipulator();
    DexterityConfig dexterity{};
    /// Low-dexterity abandonment threshold on normalized Dex.
    double tau = 0.3;
    std::size_t n_samples = 200000;
    std::uint64_t seed = 1;
    double resolution = 0.02;
    /// Use the nearest scattered-pair distance as the voxel edge.
    bool resolution_auto = false;
    EhemModel ehem{};
    double mirror_plane_y = 0.0;
    std::size_t ehem_samples = 500000;
    DualArmLayout layout{};
    /// Replace dexterity values by 1 before dual-arm composition.
    bool binarize = false;
    /// Minimum V_dual kept in the interaction workspace.
    double interaction_tau = 0.0;
    /// F is averaged over seeds seed, seed+1, ... (robustness studies).
    std::size_t seed_repeats = 1;
};

/// Every intermediate of one pipeline run.
struct DesignEvaluation {
    DesignPoint point;
    std::uint64_t seed = 0;
    bool degenerate = false;
    std::string warning;
    double resolution = 0.0;
    std::size_t samples_total = 0;
    std::size_t samples_kept = 0;
    double dex_max = 0.0;
    ScatterField scatter;
    VoxelGrid robot_grid;
    EhemField e_left;
    EhemField e_right;
    InteractionResult interaction;
};

/// One full run (sampling, filtering, voxelization, dual-arm composition,
/// EHEM intersection) for a single seed. A design without dexterous
/// workspace is reported as degenerate with F = 0 rather than throwing.
DesignEvaluation evaluate_design_detailed(const DesignPoint& p, const EvaluationConfig& cfg,
                                          std::uint64_t seed, const Execution& exec = {});

/// F of the design, averaged over cfg.seed_repeats seeds.
double evaluate_design(const DesignPoint& p, const EvaluationConfig& cfg, const Execution& exec = {});

}  // namespace ergoscope

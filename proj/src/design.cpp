#include "ergoscope/design.hpp"

#include <algorithm>
#include <iostream>
#include <vector>

namespace ergoscope {

DesignEvaluation evaluate_design_detailed(const DesignPoint& p, const EvaluationConfig& cfg,
                                          std::uint64_t seed, const Execution& exec) {
    if (!(p.a3 >= 0.0 && p.a4 >= 0.0 && p.D >= 0.0)) {
        throw InvalidInput("design point lengths must be nonnegative");
    }
    DesignEvaluation out;
    out.point = p;
    out.seed = seed;
    out.samples_total = cfg.n_samples;
    const ManipulatorModel model = cfg.manipulator.with_link_lengths(p.a3, p.a4);
    DualArmLayout layout = cfg.layout;
    layout.D = p.D;
    const EhemModel right = mirror_ehem(cfg.ehem, cfg.mirror_plane_y);

    try {
        out.scatter = sample_workspace(model, cfg.n_samples, seed, cfg.dexterity, exec);
        out.dex_max = out.scatter.dex_max;
        ScatterField kept = threshold_filter(out.scatter, cfg.tau);
        out.samples_kept = kept.samples.size();
        out.resolution = cfg.resolution;
        if (cfg.resolution_auto) {
            std::vector<Vec3> positions;
            positions.reserve(kept.samples.size());
            for (const auto& s : kept.samples) positions.push_back(s.position);
            out.resolution = positions.size() > 1 ? nearest_pair_distance(positions) : 0.0;
            if (!(out.resolution > 0.0)) {
                throw DegenerateWorkspace("automatic resolution is zero: all kept samples coincide");
            }
        }
        out.robot_grid = voxelize(kept, out.resolution);
    } catch (const DegenerateWorkspace& e) {
        out.degenerate = true;
        out.warning = e.what();
        return out;
    }

    VoxelGrid robot = out.robot_grid;
    if (cfg.binarize) {
        for (double& v : robot.values()) v = v > 0.0 ? 1.0 : 0.0;
    }
    const VoxelGrid dual = combine_dual_arm(robot, layout);

    // Common lattice covering the dual-arm field and both ergonomic arms.
    const auto [l_lo, l_hi] = cfg.ehem.bounding_box();
    const auto [r_lo, r_hi] = right.bounding_box();
    const VoxelGrid lattice = expand_to_cover(dual, l_lo.cwiseMin(r_lo), l_hi.cwiseMax(r_hi));

    out.e_left = sample_ehem(cfg.ehem, cfg.ehem_samples, seed, lattice, exec);
    out.e_right = sample_ehem(right, cfg.ehem_samples, seed, lattice, exec);
    out.interaction = evaluate_interaction(out.e_left, out.e_right, lattice, cfg.interaction_tau);
    return out;
}

double evaluate_design(const DesignPoint& p, const EvaluationConfig& cfg, const Execution& exec) {
    const std::size_t repeats = std::max<std::size_t>(cfg.seed_repeats, 1);
    double total = 0.0;
    for (std::size_t s = 0; s < repeats; ++s) {
        const DesignEvaluation e = evaluate_design_detailed(p, cfg, cfg.seed + s, exec);
        if (e.degenerate) {
            std::clog << "warning: design (" << p.a3 << ", " << p.a4 << ", " << p.D
                      << ") scored F = 0: " << e.warning << '\n';
        }
        total += e.degenerate ? 0.0 : e.interaction.F;
    }
    return total / static_cast<double>(repeats);
}

}  // namespace ergoscope

#pragma once

#include "ergoscope/common.hpp"
#include "ergoscope/ehem.hpp"
#include "ergoscope/voxel_grid.hpp"

namespace ergoscope {

/**
 * Placement of the two manipulators in the operator frame. The first arm's
 * base sits at R, the second at R - D * x (x is the mounting axis). Both
 * offsets are rounded to whole voxels of the robot grid.
 */
struct DualArmLayout {
    Vec3 R = Vec3::Zero();
    double D = 0.0;
    /// Standardization factor applied to the sum of both copies.
    double alpha = 0.5;

    void validate() const;
    bool operator==(const DualArmLayout&) const = default;
};

/**
 * V_dual(i) = alpha * [V(i - r) + V(i + d*x - r)] with r = round(R / res),
 * d = round(D / res). Out-of-range lookups read 0; the output lattice
 * (same phase as the input) is the smallest one holding both copies;
 * values are clamped to [0, 1].
 */
VoxelGrid combine_dual_arm(const VoxelGrid& left_grid, const DualArmLayout& layout);

/// Sum over voxels of (E_left + E_right) * V_dual.
double ergonomic_interaction_score(const EhemField& e_left, const EhemField& e_right,
                                   const VoxelGrid& v_dual);

/// V_dual where V_dual >= tau and either arm's occupancy is nonzero; 0 elsewhere.
VoxelGrid interaction_workspace(const EhemField& e_left, const EhemField& e_right,
                                const VoxelGrid& v_dual, double tau);

/// Occupancy union of both EHEM arms (1 where either is occupied).
VoxelGrid ehem_union(const EhemField& e_left, const EhemField& e_right);

/// F = V_I / V_R. Throws DegenerateErgonomicModel when V_R = 0.
double optimization_index(const VoxelGrid& v_interaction, const EhemField& e_left,
                          const EhemField& e_right);

struct InteractionResult {
    VoxelGrid v_dual;
    VoxelGrid v_interaction;
    double score = 0.0;
    double V_I = 0.0;
    double V_R = 0.0;
    double F = 0.0;
};

/// Every Eq.-style quantity at once on co-registered grids.
InteractionResult evaluate_interaction(const EhemField& e_left, const EhemField& e_right,
                                       const VoxelGrid& v_dual, double tau);

}  // namespace ergoscope

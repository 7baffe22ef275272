#pragma once

#include "ergoscope/common.hpp"
#include "ergoscope/dexterity.hpp"
#include "ergoscope/kinematics.hpp"
#include "ergoscope/parallel.hpp"
#include "ergoscope/voxel_grid.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace ergoscope {

/// One Monte Carlo draw.
struct DexSample {
    JointVector q{};
    Vec3 position = Vec3::Zero();
    Mat3 orientation = Mat3::Identity();
    double dex_raw = 0.0;
    double dex_norm = 0.0;

    bool operator==(const DexSample& o) const {
        return q == o.q && position == o.position && orientation == o.orientation &&
               dex_raw == o.dex_raw && dex_norm == o.dex_norm;
    }
};

/// Scattered dexterity samples with their tight axis-aligned bounds.
struct ScatterField {
    std::vector<DexSample> samples;
    Vec3 bounds_lower = Vec3::Zero();
    Vec3 bounds_upper = Vec3::Zero();
    /// Raw dexterity maximum used as the normalizing constant.
    double dex_max = 0.0;

    bool operator==(const ScatterField&) const = default;
};

/// Recomputes the tight bounds of `field.samples`.
void update_bounds(ScatterField& field);

/**
 * Draws n_samples joint configurations (sample i from counter stream
 * (seed, i)), evaluates pose and penalized dexterity, and normalizes over
 * the set. The result does not depend on the number of workers.
 *
 * Throws DegenerateWorkspace when every draw has zero dexterity.
 */
ScatterField sample_workspace(const ManipulatorModel& model, std::size_t n_samples,
                              std::uint64_t seed, const DexterityConfig& cfg,
                              const Execution& exec = {});

/// Keeps samples with dex_norm >= tau (no renormalization) and tightens
/// the bounds. Throws DegenerateWorkspace if nothing survives.
ScatterField threshold_filter(const ScatterField& field, double tau);

/**
 * Bins the samples into cubes of edge r anchored at bounds_lower: sample
 * x goes to storage index floor((x - lower) / r) per axis, clamped to the
 * last voxel. dims = floor((upper - lower) / r) + 1. A voxel holds the
 * maximum dex_norm that landed in it, 0 if none did.
 */
VoxelGrid voxelize(const ScatterField& field, double r);

/// Smallest nonzero distance between two sample positions, found with a
/// uniform hash grid. Exact duplicates are ignored. Returns 0 when all
/// positions coincide.
double nearest_pair_distance(std::span<const Vec3> points);

struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;

    bool empty() const { return triangles.empty(); }
    double area() const;
};

/**
 * Marching-cubes level set of the grid at `isovalue`. The field is treated
 * as zero outside the lattice, so surfaces touching the boundary close
 * there. Vertices are shared between adjacent cells and placed in world
 * coordinates; triangles wind counter-clockwise seen from the low side.
 */
TriangleMesh extract_isosurface(const VoxelGrid& grid, double isovalue);

}  // namespace ergoscope

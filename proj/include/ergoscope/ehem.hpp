#pragma once

#include "ergoscope/common.hpp"
#include "ergoscope/parallel.hpp"
#include "ergoscope/voxel_grid.hpp"

#include <cstdint>
#include <optional>

namespace ergoscope {

/// Ergonomic index stored in every occupied EHEM voxel.
inline constexpr double kErgonomicIndex = 0.5;

struct Interval {
    double lower = 0.0;
    double upper = 0.0;

    double width() const { return upper - lower; }
    bool contains(double v) const { return v >= lower && v <= upper; }
    bool operator==(const Interval&) const = default;
};

/**
 * Equivalent human ergonomic model of one armrest-supported arm, in the
 * operator frame (x forward, y along the desk edge, z up).
 *
 * hand = fulcrum + slide * y + reach * x
 *      + RotZ(roll) * RotY(-pitch) * (forearm_length * x) + wrist_offset
 *
 * Positive pitch raises the hand; roll swings the forearm sideways about
 * the vertical through the fulcrum. |wrist_offset| <= wrist_radius.
 *
 * Default dimensions are engineering choices, not measured anthropometry.
 */
struct EhemModel {
    Vec3 fulcrum = Vec3::Zero();
    Interval desk_slide_range{-0.10, 0.10};
    Interval reach_range{-0.10, 0.10};
    Interval pitch_range{-0.5235987755982988, 0.5235987755982988};
    Interval roll_range{-0.5235987755982988, 0.5235987755982988};
    double forearm_length = 0.25;
    double wrist_radius = 0.08;

    /// Throws InvalidInput when an interval is reversed or a length is not
    /// positive.
    void validate() const;
    /// Axis-aligned box guaranteed to contain every hand position.
    std::pair<Vec3, Vec3> bounding_box() const;

    bool operator==(const EhemModel&) const = default;
};

struct EhemCoordinates {
    double slide = 0.0;
    double reach = 0.0;
    double pitch = 0.0;
    double roll = 0.0;
    Vec3 wrist_offset = Vec3::Zero();
};

/// Throws InvalidInput when a coordinate is outside the model's ranges.
Vec3 ehem_hand_position(const EhemModel& model, const EhemCoordinates& u);

/// Occupancy of one arm on a robot lattice: occupied voxels hold exactly
/// kErgonomicIndex, all others 0.
struct EhemField {
    VoxelGrid grid;
    std::size_t samples_in_bounds = 0;
    std::size_t samples_discarded = 0;

    std::size_t occupied() const { return grid.count_above(kErgonomicIndex); }
};

/**
 * Draws n_samples coordinate vectors and marks the template voxel nearest
 * to each hand position. Positions outside the template lattice are
 * discarded and counted.
 *
 * Draws come from counter stream (seed, i). When `envelope` is given the
 * coordinates are drawn over the envelope's (wider) ranges and samples
 * outside `model` are rejected, so a narrower model's occupied voxels are
 * a subset of a wider model's under the same seed and envelope.
 */
EhemField sample_ehem(const EhemModel& model, std::size_t n_samples, std::uint64_t seed,
                      const VoxelGrid& grid_template, const Execution& exec = {},
                      const std::optional<EhemModel>& envelope = std::nullopt);

/// Reflection of the arm across the vertical plane y = plane_y.
EhemModel mirror_ehem(const EhemModel& model, double plane_y);

}  // namespace ergoscope

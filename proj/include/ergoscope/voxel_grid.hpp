#pragma once

#include "ergoscope/common.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace ergoscope {

using Index3 = std::array<long, 3>;

/**
 * Dense axis-aligned scalar field. `origin` is the world position of the
 * center of the first voxel; voxel (i, j, k) (0-based) is centered at
 * origin + r * (i, j, k). Values are stored k-fastest.
 *
 * Storage indices are 0-based; the 1-based index of the voxelization
 * formula is the storage index plus one.
 */
class VoxelGrid {
public:
    VoxelGrid() = default;
    VoxelGrid(Vec3 origin, double resolution, Index3 dims, double fill = 0.0);

    const Vec3& origin() const { return origin_; }
    double resolution() const { return resolution_; }
    const Index3& dims() const { return dims_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    std::size_t flat(long i, long j, long k) const {
        return static_cast<std::size_t>((i * dims_[1] + j) * dims_[2] + k);
    }
    bool contains(long i, long j, long k) const {
        return i >= 0 && j >= 0 && k >= 0 && i < dims_[0] && j < dims_[1] && k < dims_[2];
    }
    double& at(long i, long j, long k) { return values_[flat(i, j, k)]; }
    double at(long i, long j, long k) const { return values_[flat(i, j, k)]; }
    /// Value at (i, j, k), or 0 outside the lattice.
    double value_or_zero(long i, long j, long k) const {
        return contains(i, j, k) ? at(i, j, k) : 0.0;
    }

    Vec3 center(long i, long j, long k) const {
        return origin_ + resolution_ * Vec3(double(i), double(j), double(k));
    }
    /// Nearest voxel index of a world position (may lie outside the lattice).
    Index3 nearest_index(const Vec3& p) const;

    /// Same origin, resolution and dims.
    bool co_registered(const VoxelGrid& other) const;

    std::size_t count_above(double tau) const;

    bool operator==(const VoxelGrid&) const = default;

private:
    Vec3 origin_ = Vec3::Zero();
    double resolution_ = 1.0;
    Index3 dims_{0, 0, 0};
    std::vector<double> values_;
};

/// (number of voxels with value >= tau and value > 0) * r^3.
double grid_volume(const VoxelGrid& grid, double tau);

/// Grid on the same lattice as `grid` (origin shifted by whole voxels),
/// enlarged with zeros so that the box [lower, upper] is covered.
VoxelGrid expand_to_cover(const VoxelGrid& grid, const Vec3& lower, const Vec3& upper);

/// Throws InvalidInput unless every grid shares origin, resolution and dims.
void require_co_registered(const VoxelGrid& a, const VoxelGrid& b, const char* what);

}  // namespace ergoscope

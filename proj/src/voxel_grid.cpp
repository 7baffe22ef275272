#include "ergoscope/voxel_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ergoscope {

namespace {
// Upper bound on dense grid size (about 2 GB of doubles).
constexpr double kMaxVoxels = 2.5e8;
}  // namespace

VoxelGrid::VoxelGrid(Vec3 origin, double resolution, Index3 dims, double fill)
    : origin_(std::move(origin)), resolution_(resolution), dims_(dims) {
    if (!(resolution > 0.0) || !std::isfinite(resolution)) {
        throw InvalidInput("voxel resolution must be positive and finite");
    }
    if (!origin_.allFinite()) throw InvalidInput("voxel grid origin must be finite");
    double total = 1.0;
    for (long n : dims_) {
        if (n < 0) throw InvalidInput("voxel grid dimensions must be nonnegative");
        total *= static_cast<double>(n);
    }
    if (total > kMaxVoxels) {
        throw InvalidInput("voxel grid of " + std::to_string(total) +
                           " cells exceeds the supported size; use a coarser resolution");
    }
    values_.assign(static_cast<std::size_t>(total), fill);
}

Index3 VoxelGrid::nearest_index(const Vec3& p) const {
    Index3 idx{};
    for (int a = 0; a < 3; ++a) {
        idx[a] = std::lround((p[a] - origin_[a]) / resolution_);
    }
    return idx;
}

bool VoxelGrid::co_registered(const VoxelGrid& other) const {
    return origin_ == other.origin_ && resolution_ == other.resolution_ && dims_ == other.dims_;
}

std::size_t VoxelGrid::count_above(double tau) const {
    return static_cast<std::size_t>(std::count_if(
        values_.begin(), values_.end(), [tau](double v) { return v > 0.0 && v >= tau; }));
}

double grid_volume(const VoxelGrid& grid, double tau) {
    const double r = grid.resolution();
    return static_cast<double>(grid.count_above(tau)) * r * r * r;
}

VoxelGrid expand_to_cover(const VoxelGrid& grid, const Vec3& lower, const Vec3& upper) {
    const double r = grid.resolution();
    Index3 lo{0, 0, 0};
    Index3 hi{grid.dims()[0] - 1, grid.dims()[1] - 1, grid.dims()[2] - 1};
    for (int a = 0; a < 3; ++a) {
        const double first = std::floor((lower[a] - grid.origin()[a]) / r + 0.5);
        const double last = std::ceil((upper[a] - grid.origin()[a]) / r - 0.5);
        lo[a] = std::min<long>(lo[a], static_cast<long>(first));
        hi[a] = std::max<long>(hi[a], static_cast<long>(last));
    }
    const Vec3 origin = grid.center(lo[0], lo[1], lo[2]);
    VoxelGrid out(origin, r, {hi[0] - lo[0] + 1, hi[1] - lo[1] + 1, hi[2] - lo[2] + 1});
    const Index3& d = grid.dims();
    for (long i = 0; i < d[0]; ++i)
        for (long j = 0; j < d[1]; ++j)
            for (long k = 0; k < d[2]; ++k)
                out.at(i - lo[0], j - lo[1], k - lo[2]) = grid.at(i, j, k);
    return out;
}

void require_co_registered(const VoxelGrid& a, const VoxelGrid& b, const char* what) {
    if (!a.co_registered(b)) {
        throw InvalidInput(std::string(what) + ": grids are not on the same lattice");
    }
}

}  // namespace ergoscope

#include "ergoscope/workspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace ergoscope {

void update_bounds(ScatterField& field) {
    if (field.samples.empty()) {
        field.bounds_lower = field.bounds_upper = Vec3::Zero();
        return;
    }
    Vec3 lo = field.samples.front().position;
    Vec3 hi = lo;
    for (const DexSample& s : field.samples) {
        lo = lo.cwiseMin(s.position);
        hi = hi.cwiseMax(s.position);
    }
    field.bounds_lower = lo;
    field.bounds_upper = hi;
}

ScatterField sample_workspace(const ManipulatorModel& model, std::size_t n_samples,
                              std::uint64_t seed, const DexterityConfig& cfg,
                              const Execution& exec) {
    if (n_samples == 0) throw InvalidInput("n_samples must be at least 1");
    if (!(cfg.K > 0.0)) throw InvalidInput("penalty scaling factor K must be positive");

    ScatterField field;
    field.samples.resize(n_samples);
    parallel_for(n_samples, exec, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            CounterStream stream(seed, StreamId::JointSamples, i);
            DexSample& s = field.samples[i];
            s.q = sample_joint_config(model, stream);
            const Pose pose = forward_kinematics(model, s.q);
            s.position = pose.position;
            s.orientation = pose.orientation;
            s.dex_raw = dexterity(model, s.q, cfg);
        }
    });

    std::vector<double> raw(n_samples);
    std::transform(field.samples.begin(), field.samples.end(), raw.begin(),
                   [](const DexSample& s) { return s.dex_raw; });
    const std::vector<double> norm = normalize_dexterity(raw);
    for (std::size_t i = 0; i < n_samples; ++i) field.samples[i].dex_norm = norm[i];
    field.dex_max = *std::max_element(raw.begin(), raw.end());
    update_bounds(field);
    return field;
}

ScatterField threshold_filter(const ScatterField& field, double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw InvalidInput("threshold must lie in [0, 1]");
    ScatterField out;
    out.dex_max = field.dex_max;
    std::copy_if(field.samples.begin(), field.samples.end(), std::back_inserter(out.samples),
                 [tau](const DexSample& s) { return s.dex_norm >= tau; });
    if (out.samples.empty()) {
        throw DegenerateWorkspace("no sample reaches the dexterity threshold " +
                                  std::to_string(tau));
    }
    update_bounds(out);
    return out;
}

VoxelGrid voxelize(const ScatterField& field, double r) {
    if (!(r > 0.0)) throw InvalidInput("voxel resolution must be positive");
    if (field.samples.empty()) throw InvalidInput("cannot voxelize an empty scatter field");

    const Vec3& lower = field.bounds_lower;
    Index3 dims{};
    for (int a = 0; a < 3; ++a) {
        const double cells = std::floor((field.bounds_upper[a] - lower[a]) / r);
        if (!(cells >= 0.0) || cells > 1e9) throw InvalidInput("scatter bounds are invalid");
        dims[a] = static_cast<long>(cells) + 1;
    }
    VoxelGrid grid(lower + Vec3::Constant(0.5 * r), r, dims);
    for (const DexSample& s : field.samples) {
        long idx[3];
        for (int a = 0; a < 3; ++a) {
            const double cell = std::floor((s.position[a] - lower[a]) / r);
            idx[a] = std::clamp(static_cast<long>(cell), 0L, dims[a] - 1);
        }
        double& v = grid.at(idx[0], idx[1], idx[2]);
        v = std::max(v, s.dex_norm);
    }
    return grid;
}

namespace {

struct CellKey {
    long x, y, z;
    bool operator==(const CellKey&) const = default;
};

struct CellHash {
    std::size_t operator()(const CellKey& c) const noexcept {
        std::uint64_t h = static_cast<std::uint64_t>(c.x) * 0x9E3779B97F4A7C15ull;
        h ^= static_cast<std::uint64_t>(c.y) * 0xC2B2AE3D27D4EB4Full + (h << 6) + (h >> 2);
        h ^= static_cast<std::uint64_t>(c.z) * 0x165667B19E3779F9ull + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

// Minimum nonzero pair distance among pairs that fall in neighbouring
// cells of edge h; any pair closer than h is guaranteed to be seen.
double nearest_within_cells(std::span<const Vec3> pts, const Vec3& lower, double h) {
    std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> cells;
    cells.reserve(pts.size());
    auto key_of = [&](const Vec3& p) {
        return CellKey{static_cast<long>(std::floor((p.x() - lower.x()) / h)),
                       static_cast<long>(std::floor((p.y() - lower.y()) / h)),
                       static_cast<long>(std::floor((p.z() - lower.z()) / h))};
    };
    for (std::size_t i = 0; i < pts.size(); ++i) cells[key_of(pts[i])].push_back(i);

    double best2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const CellKey c = key_of(pts[i]);
        for (long dx = -1; dx <= 1; ++dx)
            for (long dy = -1; dy <= 1; ++dy)
                for (long dz = -1; dz <= 1; ++dz) {
                    auto it = cells.find(CellKey{c.x + dx, c.y + dy, c.z + dz});
                    if (it == cells.end()) continue;
                    for (std::size_t j : it->second) {
                        if (j <= i) continue;
                        const double d2 = (pts[i] - pts[j]).squaredNorm();
                        if (d2 > 0.0) best2 = std::min(best2, d2);
                    }
                }
    }
    return std::sqrt(best2);
}

}  // namespace

double nearest_pair_distance(std::span<const Vec3> points) {
    if (points.size() < 2) throw InvalidInput("nearest-pair distance needs at least two points");
    Vec3 lo = points.front(), hi = points.front();
    for (const Vec3& p : points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double extent = (hi - lo).maxCoeff();
    if (extent == 0.0) return 0.0;
    // Start near the mean spacing and widen until a pair closer than the
    // cell edge shows up; the diagonal always contains every pair.
    double h = extent / std::cbrt(static_cast<double>(points.size()));
    const double diagonal = (hi - lo).norm();
    while (true) {
        const double d = nearest_within_cells(points, lo, h);
        if (d <= h || h >= diagonal) return d;
        h *= 2.0;
    }
}

double TriangleMesh::area() const {
    double total = 0.0;
    for (const auto& t : triangles) {
        total += 0.5 * (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]).norm();
    }
    return total;
}

}  // namespace ergoscope

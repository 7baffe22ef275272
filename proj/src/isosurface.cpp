#include "ergoscope/workspace.hpp"

#include "marching_cubes_tables.hpp"

#include <unordered_map>

namespace ergoscope {

namespace {

// Corner offsets in table order.
constexpr int kCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                               {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
constexpr int kEdgeCorners[12][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
                                     {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};

}  // namespace

TriangleMesh extract_isosurface(const VoxelGrid& grid, double isovalue) {
    TriangleMesh mesh;
    if (grid.empty()) return mesh;
    const Index3& d = grid.dims();

    // Lattice points run from -1 to n (one zero layer on each side), so
    // cells start at -1 and end at n - 1. Shift to nonnegative ids for keys.
    const long sy = d[1] + 2, sz = d[2] + 2;
    auto point_id = [&](long i, long j, long k) {
        return static_cast<std::uint64_t>(((i + 1) * sy + (j + 1)) * sz + (k + 1));
    };
    std::unordered_map<std::uint64_t, std::uint32_t> edge_vertex;

    for (long i = -1; i < d[0]; ++i) {
        for (long j = -1; j < d[1]; ++j) {
            for (long k = -1; k < d[2]; ++k) {
                double value[8];
                int case_index = 0;
                for (int c = 0; c < 8; ++c) {
                    value[c] = grid.value_or_zero(i + kCorner[c][0], j + kCorner[c][1],
                                                  k + kCorner[c][2]);
                    if (value[c] < isovalue) case_index |= 1 << c;
                }
                const int edges = detail::kEdgeTable[case_index];
                if (edges == 0) continue;

                std::uint32_t cell_vertex[12];
                for (int e = 0; e < 12; ++e) {
                    if (!(edges & (1 << e))) continue;
                    int a = kEdgeCorners[e][0], b = kEdgeCorners[e][1];
                    const long ai = i + kCorner[a][0], aj = j + kCorner[a][1], ak = k + kCorner[a][2];
                    const long bi = i + kCorner[b][0], bj = j + kCorner[b][1], bk = k + kCorner[b][2];
                    std::uint64_t ida = point_id(ai, aj, ak), idb = point_id(bi, bj, bk);
                    // Orient each edge from its lower lattice point so both
                    // neighbouring cells interpolate identically.
                    if (idb < ida) {
                        std::swap(a, b);
                        std::swap(ida, idb);
                    }
                    int axis = 0;
                    while (kCorner[a][axis] == kCorner[b][axis]) ++axis;
                    const std::uint64_t key = ida * 3 + static_cast<std::uint64_t>(axis);
                    auto [it, inserted] = edge_vertex.try_emplace(
                        key, static_cast<std::uint32_t>(mesh.vertices.size()));
                    if (inserted) {
                        const Vec3 pa = grid.center(i + kCorner[a][0], j + kCorner[a][1], k + kCorner[a][2]);
                        const Vec3 pb = grid.center(i + kCorner[b][0], j + kCorner[b][1], k + kCorner[b][2]);
                        const double t = (isovalue - value[a]) / (value[b] - value[a]);
                        mesh.vertices.push_back(pa + t * (pb - pa));
                    }
                    cell_vertex[e] = it->second;
                }
                const int* tri = detail::kTriTable[case_index];
                for (int t = 0; tri[t] != -1; t += 3) {
                    const std::array<std::uint32_t, 3> face{cell_vertex[tri[t]], cell_vertex[tri[t + 1]],
                                                            cell_vertex[tri[t + 2]]};
                    if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2]) continue;
                    mesh.triangles.push_back(face);
                }
            }
        }
    }
    return mesh;
}

}  // namespace ergoscope

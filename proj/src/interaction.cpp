#include "ergoscope/interaction.hpp"

#include <algorithm>
#include <cmath>

namespace ergoscope {

void DualArmLayout::validate() const {
    if (!R.allFinite()) throw InvalidInput("layout R must be finite");
    if (!(D >= 0.0) || !std::isfinite(D)) throw InvalidInput("layout D must be >= 0");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidInput("layout alpha must lie in (0, 1]");
}

VoxelGrid combine_dual_arm(const VoxelGrid& left_grid, const DualArmLayout& layout) {
    layout.validate();
    const double res = left_grid.resolution();
    const Index3& n = left_grid.dims();
    const Index3 shift{std::lround(layout.R.x() / res), std::lround(layout.R.y() / res),
                       std::lround(layout.R.z() / res)};
    const long d = std::lround(layout.D / res);

    // Copy A lands at input + shift, copy B at input + shift - d along x.
    Index3 lo{}, hi{};
    for (int a = 0; a < 3; ++a) {
        lo[a] = shift[a];
        hi[a] = shift[a] + n[a] - 1;
    }
    lo[0] = std::min(lo[0], shift[0] - d);
    hi[0] = std::max(hi[0], shift[0] + n[0] - 1 - d);

    VoxelGrid out(left_grid.center(lo[0], lo[1], lo[2]), res,
                  {hi[0] - lo[0] + 1, hi[1] - lo[1] + 1, hi[2] - lo[2] + 1});
    const Index3& m = out.dims();
    for (long i = 0; i < m[0]; ++i) {
        for (long j = 0; j < m[1]; ++j) {
            for (long k = 0; k < m[2]; ++k) {
                // Output index in the input's index space.
                const long ii = i + lo[0], jj = j + lo[1], kk = k + lo[2];
                const double first = left_grid.value_or_zero(ii - shift[0], jj - shift[1], kk - shift[2]);
                const double second =
                    left_grid.value_or_zero(ii + d - shift[0], jj - shift[1], kk - shift[2]);
                out.at(i, j, k) = std::clamp(layout.alpha * (first + second), 0.0, 1.0);
            }
        }
    }
    return out;
}

double ergonomic_interaction_score(const EhemField& e_left, const EhemField& e_right,
                                   const VoxelGrid& v_dual) {
    require_co_registered(e_left.grid, v_dual, "ergonomic interaction score");
    require_co_registered(e_right.grid, v_dual, "ergonomic interaction score");
    const auto& l = e_left.grid.values();
    const auto& r = e_right.grid.values();
    const auto& v = v_dual.values();
    double sum = 0.0;
    for (std::size_t n = 0; n < v.size(); ++n) sum += (l[n] + r[n]) * v[n];
    return sum;
}

VoxelGrid interaction_workspace(const EhemField& e_left, const EhemField& e_right,
                                const VoxelGrid& v_dual, double tau) {
    require_co_registered(e_left.grid, v_dual, "interaction workspace");
    require_co_registered(e_right.grid, v_dual, "interaction workspace");
    if (!(tau >= 0.0 && tau <= 1.0)) throw InvalidInput("interaction threshold must lie in [0, 1]");
    VoxelGrid out(v_dual.origin(), v_dual.resolution(), v_dual.dims());
    const auto& l = e_left.grid.values();
    const auto& r = e_right.grid.values();
    const auto& v = v_dual.values();
    auto& o = out.values();
    for (std::size_t n = 0; n < v.size(); ++n) {
        if (v[n] >= tau && l[n] + r[n] > 0.0) o[n] = v[n];
    }
    return out;
}

VoxelGrid ehem_union(const EhemField& e_left, const EhemField& e_right) {
    require_co_registered(e_left.grid, e_right.grid, "EHEM union");
    VoxelGrid out(e_left.grid.origin(), e_left.grid.resolution(), e_left.grid.dims());
    const auto& l = e_left.grid.values();
    const auto& r = e_right.grid.values();
    auto& o = out.values();
    for (std::size_t n = 0; n < o.size(); ++n) o[n] = (l[n] > 0.0 || r[n] > 0.0) ? 1.0 : 0.0;
    return out;
}

double optimization_index(const VoxelGrid& v_interaction, const EhemField& e_left,
                          const EhemField& e_right) {
    require_co_registered(e_left.grid, v_interaction, "optimization index");
    const double v_r = grid_volume(ehem_union(e_left, e_right), 0.0);
    if (!(v_r > 0.0)) {
        throw DegenerateErgonomicModel("human ergonomic workspace is empty (V_R = 0)");
    }
    return grid_volume(v_interaction, 0.0) / v_r;
}

InteractionResult evaluate_interaction(const EhemField& e_left, const EhemField& e_right,
                                       const VoxelGrid& v_dual, double tau) {
    InteractionResult out;
    out.v_dual = v_dual;
    out.v_interaction = interaction_workspace(e_left, e_right, v_dual, tau);
    out.score = ergonomic_interaction_score(e_left, e_right, v_dual);
    out.V_I = grid_volume(out.v_interaction, 0.0);
    out.V_R = grid_volume(ehem_union(e_left, e_right), 0.0);
    out.F = optimization_index(out.v_interaction, e_left, e_right);
    return out;
}

}  // namespace ergoscope

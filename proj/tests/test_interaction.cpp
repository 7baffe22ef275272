#include "ergoscope/interaction.hpp"

#include "test_helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

using namespace ergoscope;

namespace {

VoxelGrid random_grid(std::mt19937_64& gen, Index3 dims, double r, double density = 0.5) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_real_distribution<double> o(-0.2, 0.2);
    VoxelGrid g(Vec3(o(gen), o(gen), o(gen)), r, dims);
    for (double& v : g.values()) v = u(gen) < density ? u(gen) : 0.0;
    return g;
}

EhemField random_ehem(std::mt19937_64& gen, const VoxelGrid& tmpl, double density) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    EhemField f{VoxelGrid(tmpl.origin(), tmpl.resolution(), tmpl.dims())};
    for (double& v : f.grid.values()) v = u(gen) < density ? kErgonomicIndex : 0.0;
    return f;
}

// Eq. 3 written as a map over 1-based lattice labels: every input voxel
// (i, j, k) contributes to output label (i + r, j, k) + shift with weight
// alpha, once directly and once displaced by -d along the mounting axis.
VoxelGrid combine_oracle(const VoxelGrid& v, const DualArmLayout& layout) {
    const double res = v.resolution();
    const long rx = std::lround(layout.R.x() / res), ry = std::lround(layout.R.y() / res),
               rz = std::lround(layout.R.z() / res), d = std::lround(layout.D / res);
    std::map<Index3, double> sum;
    const Index3 n = v.dims();
    for (long i = 1; i <= n[0]; ++i)
        for (long j = 1; j <= n[1]; ++j)
            for (long k = 1; k <= n[2]; ++k) {
                sum[{i + rx, j + ry, k + rz}] += 0.0;
                sum[{i + rx - d, j + ry, k + rz}] += 0.0;
            }
    Index3 lo = sum.begin()->first, hi = lo;
    for (const auto& [key, unused] : sum)
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], key[a]);
            hi[a] = std::max(hi[a], key[a]);
        }
    VoxelGrid out(v.center(lo[0] - 1, lo[1] - 1, lo[2] - 1), res,
                  {hi[0] - lo[0] + 1, hi[1] - lo[1] + 1, hi[2] - lo[2] + 1});
    auto lookup = [&](long i, long j, long k) {
        if (i < 1 || j < 1 || k < 1 || i > n[0] || j > n[1] || k > n[2]) return 0.0;
        return v.at(i - 1, j - 1, k - 1);
    };
    for (long i = lo[0]; i <= hi[0]; ++i)
        for (long j = lo[1]; j <= hi[1]; ++j)
            for (long k = lo[2]; k <= hi[2]; ++k) {
                double value = layout.alpha * (lookup(i - rx, j - ry, k - rz) + lookup(i + d - rx, j - ry, k - rz));
                value = value > 1.0 ? 1.0 : value;
                out.at(i - lo[0], j - lo[1], k - lo[2]) = value;
            }
    return out;
}

double score_oracle(const EhemField& l, const EhemField& r, const VoxelGrid& v) {
    double s = 0.0;
    for (long i = 0; i < v.dims()[0]; ++i)
        for (long j = 0; j < v.dims()[1]; ++j)
            for (long k = 0; k < v.dims()[2]; ++k)
                s += (l.grid.at(i, j, k) + r.grid.at(i, j, k)) * v.at(i, j, k);
    return s;
}

std::size_t interaction_count_oracle(const EhemField& l, const EhemField& r, const VoxelGrid& v, double tau) {
    std::size_t count = 0;
    for (long i = 0; i < v.dims()[0]; ++i)
        for (long j = 0; j < v.dims()[1]; ++j)
            for (long k = 0; k < v.dims()[2]; ++k) {
                const bool human = l.grid.at(i, j, k) > 0 || r.grid.at(i, j, k) > 0;
                if (human && v.at(i, j, k) >= tau && v.at(i, j, k) > 0) ++count;
            }
    return count;
}

}  // namespace

TEST(CombineDualArm, IdentityLayout) {
    std::mt19937_64 gen(61);
    const VoxelGrid g = random_grid(gen, {5, 4, 3}, 0.02);
    EXPECT_EQ(combine_dual_arm(g, {Vec3::Zero(), 0.0, 0.5}), g);
}

TEST(CombineDualArm, FarApartCopiesAreDisjoint) {
    std::mt19937_64 gen(62);
    VoxelGrid g = random_grid(gen, {5, 5, 5}, 0.1, 1.0);
    for (double& v : g.values()) v = std::max(v, 0.01);
    const VoxelGrid out = combine_dual_arm(g, {Vec3::Zero(), 0.8, 0.5});
    EXPECT_EQ(out.dims(), (Index3{13, 5, 5}));
    EXPECT_EQ(out.count_above(0.0), 2 * g.count_above(0.0));
    for (long i = 0; i < 5; ++i)
        for (long j = 0; j < 5; ++j)
            for (long k = 0; k < 5; ++k) {
                EXPECT_EQ(out.at(i, j, k), 0.5 * g.at(i, j, k));
                EXPECT_EQ(out.at(i + 8, j, k), 0.5 * g.at(i, j, k));
            }
}

TEST(CombineDualArm, MatchesBruteForceOracle) {
    std::mt19937_64 gen(63);
    std::uniform_int_distribution<long> dim(1, 8), shift(-6, 6), sep(0, 9);
    std::uniform_real_distribution<double> alpha(0.05, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double r = 0.02;
        const VoxelGrid g = random_grid(gen, {dim(gen), dim(gen), dim(gen)}, r);
        const DualArmLayout layout{Vec3(shift(gen) * r, shift(gen) * r, shift(gen) * r), sep(gen) * r,
                                   trial % 3 ? 0.5 : alpha(gen)};
        const VoxelGrid got = combine_dual_arm(g, layout);
        const VoxelGrid want = combine_oracle(g, layout);
        ASSERT_EQ(got.dims(), want.dims()) << "trial " << trial;
        EXPECT_EQ(got.values(), want.values()) << "trial " << trial;
        EXPECT_LT((got.origin() - want.origin()).norm(), 1e-12) << "trial " << trial;
    }
}

TEST(CombineDualArm, HalfWeightNeverExceedsOne) {
    std::mt19937_64 gen(64);
    const VoxelGrid g = random_grid(gen, {8, 8, 8}, 0.02, 1.0);
    const VoxelGrid out = combine_dual_arm(g, {Vec3::Zero(), 0.04, 0.5});
    for (double v : out.values()) EXPECT_LE(v, 1.0);
}

TEST(CombineDualArm, RejectsBadLayout) {
    const VoxelGrid g(Vec3::Zero(), 0.02, {2, 2, 2});
    EXPECT_THROW(combine_dual_arm(g, {Vec3::Zero(), -0.1, 0.5}), InvalidInput);
    EXPECT_THROW(combine_dual_arm(g, {Vec3::Zero(), 0.1, 0.0}), InvalidInput);
    EXPECT_THROW(combine_dual_arm(g, {Vec3::Zero(), 0.1, 1.5}), InvalidInput);
}

TEST(InteractionScore, Examples) {
    const VoxelGrid tmpl(Vec3::Zero(), 0.1, {3, 3, 3});
    const EhemField zero{tmpl};
    VoxelGrid v = tmpl;
    for (int n = 0; n < 7; ++n) v.values()[static_cast<std::size_t>(n * 3)] = 1.0;
    EXPECT_EQ(ergonomic_interaction_score(zero, zero, v), 0.0);
    EhemField full{VoxelGrid(tmpl.origin(), 0.1, tmpl.dims(), kErgonomicIndex)};
    EXPECT_EQ(ergonomic_interaction_score(full, full, v), 7.0);
}

TEST(InteractionScore, MatchesBruteForceOracle) {
    std::mt19937_64 gen(65);
    std::uniform_int_distribution<long> dim(1, 8);
    for (int trial = 0; trial < 200; ++trial) {
        const VoxelGrid v = random_grid(gen, {dim(gen), dim(gen), dim(gen)}, 0.02);
        const EhemField l = random_ehem(gen, v, 0.4), r = random_ehem(gen, v, 0.3);
        EXPECT_EQ(ergonomic_interaction_score(l, r, v), score_oracle(l, r, v));
        EXPECT_EQ(ergonomic_interaction_score(l, r, v), ergonomic_interaction_score(r, l, v));
        const double tau = 0.1 * (trial % 10);
        EXPECT_EQ(interaction_workspace(l, r, v, tau).count_above(0.0), interaction_count_oracle(l, r, v, tau));
    }
}

TEST(InteractionScore, RejectsMisregisteredGrids) {
    const VoxelGrid a(Vec3::Zero(), 0.1, {3, 3, 3}), b(Vec3::Zero(), 0.1, {3, 3, 4});
    const EhemField e{a};
    EXPECT_THROW(ergonomic_interaction_score(e, e, b), InvalidInput);
    EXPECT_THROW(interaction_workspace(e, e, b, 0.0), InvalidInput);
}

TEST(InteractionWorkspace, DisjointAndSuperset) {
    const VoxelGrid tmpl(Vec3::Zero(), 0.1, {4, 4, 4});
    VoxelGrid v = tmpl;
    EhemField l{tmpl}, r{tmpl};
    for (long j = 0; j < 4; ++j)
        for (long k = 0; k < 4; ++k) {
            v.at(0, j, k) = 0.8;
            l.grid.at(3, j, k) = kErgonomicIndex;
        }
    const InteractionResult disjoint = evaluate_interaction(l, r, v, 0.0);
    EXPECT_EQ(disjoint.V_I, 0.0);
    EXPECT_EQ(disjoint.F, 0.0);

    EhemField all{VoxelGrid(tmpl.origin(), 0.1, tmpl.dims(), kErgonomicIndex)};
    const InteractionResult sup = evaluate_interaction(all, r, v, 0.0);
    EXPECT_EQ(sup.V_I, grid_volume(v, 0.0));
    EXPECT_EQ(sup.v_interaction, v);
    EXPECT_NEAR(sup.F, 0.25, 1e-15);
}

TEST(InteractionWorkspace, FullOverlapGivesUnitIndex) {
    const VoxelGrid tmpl(Vec3::Zero(), 0.1, {4, 4, 4}, 1.0);
    EhemField l{VoxelGrid(tmpl.origin(), 0.1, tmpl.dims())}, r = l;
    l.grid.at(1, 1, 1) = kErgonomicIndex;
    r.grid.at(2, 2, 2) = kErgonomicIndex;
    const InteractionResult res = evaluate_interaction(l, r, tmpl, 0.0);
    EXPECT_EQ(res.F, 1.0);
    EXPECT_EQ(res.score, 1.0);
}

TEST(InteractionWorkspace, BoxOverlapWithinOneVoxelShell) {
    const double r = 0.01;
    const VoxelGrid tmpl(Vec3::Constant(-0.3), r, {61, 61, 61});
    const Vec3 a_lo(-0.2, -0.15, -0.1), a_hi(0.1, 0.2, 0.15);
    const Vec3 b_lo(-0.05, -0.25, -0.2), b_hi(0.25, 0.05, 0.05);
    EhemField l{VoxelGrid(tmpl.origin(), r, tmpl.dims())}, right = l;
    VoxelGrid v = l.grid;
    auto inside = [](const Vec3& p, const Vec3& lo, const Vec3& hi) {
        return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
    };
    for (long i = 0; i < 61; ++i)
        for (long j = 0; j < 61; ++j)
            for (long k = 0; k < 61; ++k) {
                const Vec3 c = tmpl.center(i, j, k);
                if (inside(c, a_lo, a_hi)) l.grid.at(i, j, k) = kErgonomicIndex;
                if (inside(c, b_lo, b_hi)) v.at(i, j, k) = 0.7;
            }
    const Vec3 o_lo = a_lo.cwiseMax(b_lo), o_hi = a_hi.cwiseMin(b_hi);
    const Vec3 e = o_hi - o_lo;
    const double exact = e.prod();
    const double shell = 2.0 * (e.x() * e.y() + e.y() * e.z() + e.x() * e.z()) * r;
    const InteractionResult res = evaluate_interaction(l, right, v, 0.0);
    EXPECT_NEAR(res.V_I, exact, shell);
    const Vec3 ea = a_hi - a_lo;
    EXPECT_NEAR(res.F, exact / ea.prod(), 0.05);
}

TEST(OptimizationIndex, EmptyHumanModelIsDegenerate) {
    const VoxelGrid tmpl(Vec3::Zero(), 0.1, {2, 2, 2}, 1.0);
    const EhemField e{VoxelGrid(tmpl.origin(), 0.1, tmpl.dims())};
    EXPECT_THROW(optimization_index(tmpl, e, e), DegenerateErgonomicModel);
}

TEST(EhemUnion, CountsEitherArm) {
    const VoxelGrid tmpl(Vec3::Zero(), 0.1, {2, 2, 2});
    EhemField l{tmpl}, r{tmpl};
    l.grid.at(0, 0, 0) = r.grid.at(0, 0, 0) = kErgonomicIndex;
    r.grid.at(1, 1, 1) = kErgonomicIndex;
    EXPECT_EQ(ehem_union(l, r).count_above(0.0), 2u);
}

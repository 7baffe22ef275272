#include "ergoscope/workspace.hpp"

#include "test_helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

using namespace ergoscope;
using ergoscope::fixtures::kPi;

namespace {

ScatterField random_field(std::mt19937_64& gen, std::size_t n, double extent) {
    std::uniform_real_distribution<double> pos(-extent, extent), dex(0.0, 1.0);
    ScatterField f;
    for (std::size_t i = 0; i < n; ++i) {
        DexSample s;
        s.position = Vec3(pos(gen), pos(gen), pos(gen));
        s.dex_norm = dex(gen);
        f.samples.push_back(s);
    }
    update_bounds(f);
    return f;
}

// Independent re-binning: explicit triple index per sample, dims from the
// spacing count, results collected in a std::map before densifying.
VoxelGrid rebin_oracle(const ScatterField& f, double r) {
    Index3 dims{};
    for (int a = 0; a < 3; ++a) {
        long n = 0;
        while ((n + 1) * r <= f.bounds_upper[a] - f.bounds_lower[a]) ++n;
        dims[a] = n + 1;
    }
    std::map<Index3, double> hits;
    for (const DexSample& s : f.samples) {
        Index3 idx{};
        for (int a = 0; a < 3; ++a) {
            const long i = static_cast<long>(std::floor((s.position[a] - f.bounds_lower[a]) / r));
            idx[a] = i >= dims[a] ? dims[a] - 1 : i;
        }
        auto [it, fresh] = hits.emplace(idx, s.dex_norm);
        if (!fresh && s.dex_norm > it->second) it->second = s.dex_norm;
    }
    VoxelGrid g(f.bounds_lower + Vec3::Constant(r / 2), r, dims);
    for (const auto& [idx, v] : hits) g.at(idx[0], idx[1], idx[2]) = v;
    return g;
}

}  // namespace

TEST(SampleWorkspace, ZeroLengthsAreDegenerate) {
    // Every position collapses onto the base and the Jacobian loses its
    // linear block, so normalization has nothing to divide by.
    EXPECT_THROW(sample_workspace(master_manipulator(0.0, 0.0), 100, 1, {}), DegenerateWorkspace);
}

TEST(SampleWorkspace, PositionsInsideReachBallAndBounds) {
    const ScatterField f = sample_workspace(master_manipulator(), 20000, 3, {});
    ASSERT_EQ(f.samples.size(), 20000u);
    double max_norm = 0.0;
    for (const DexSample& s : f.samples) {
        EXPECT_LE(s.position.norm(), 0.44 + 1e-12);
        EXPECT_TRUE((s.position.array() >= f.bounds_lower.array()).all());
        EXPECT_TRUE((s.position.array() <= f.bounds_upper.array()).all());
        EXPECT_GE(s.dex_norm, 0.0);
        max_norm = std::max(max_norm, s.dex_norm);
        EXPECT_EQ(s.dex_norm, s.dex_raw / f.dex_max);
    }
    EXPECT_EQ(max_norm, 1.0);
}

TEST(SampleWorkspace, DeterministicAcrossWorkers) {
    const ManipulatorModel m = master_manipulator(0.2, 0.15);
    const ScatterField a = sample_workspace(m, 5000, 9, {}, Execution{1});
    const ScatterField b = sample_workspace(m, 5000, 9, {}, Execution{1});
    const ScatterField c = sample_workspace(m, 5000, 9, {}, Execution{8});
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
    EXPECT_NE(a, sample_workspace(m, 5000, 10, {}, Execution{1}));
}

TEST(SampleWorkspace, PrefixIsStableInSampleCount) {
    const ManipulatorModel m = master_manipulator();
    const ScatterField small = sample_workspace(m, 1000, 4, {});
    const ScatterField large = sample_workspace(m, 2000, 4, {});
    for (std::size_t i = 0; i < 1000; ++i) {
        EXPECT_EQ(small.samples[i].q, large.samples[i].q);
        EXPECT_EQ(small.samples[i].dex_raw, large.samples[i].dex_raw);
    }
}

TEST(ThresholdFilter, Examples) {
    ScatterField f;
    for (double v : {0.1, 0.3, 0.9}) {
        DexSample s;
        s.position = Vec3(v, 2 * v, 0);
        s.dex_norm = v;
        f.samples.push_back(s);
    }
    update_bounds(f);
    EXPECT_EQ(threshold_filter(f, 0.0).samples, f.samples);
    const ScatterField kept = threshold_filter(f, 0.3);
    ASSERT_EQ(kept.samples.size(), 2u);
    EXPECT_EQ(kept.samples[0].dex_norm, 0.3);
    EXPECT_EQ(kept.bounds_lower, Vec3(0.3, 0.6, 0));
    EXPECT_EQ(kept.bounds_upper, Vec3(0.9, 1.8, 0));
    EXPECT_EQ(threshold_filter(f, 0.9).samples.size(), 1u);
    EXPECT_THROW(threshold_filter(f, 0.95), DegenerateWorkspace);
}

TEST(ThresholdFilter, OnlyMaximaSurviveAtOne) {
    const ScatterField f = sample_workspace(master_manipulator(), 2000, 5, {});
    const ScatterField top = threshold_filter(f, 1.0);
    for (const DexSample& s : top.samples) EXPECT_EQ(s.dex_norm, 1.0);
}

TEST(Voxelize, SingleSample) {
    ScatterField f;
    DexSample s;
    s.position = Vec3(0.1, 0.2, 0.3);
    s.dex_norm = 0.7;
    f.samples.push_back(s);
    update_bounds(f);
    const VoxelGrid g = voxelize(f, 0.05);
    EXPECT_EQ(g.dims(), (Index3{1, 1, 1}));
    EXPECT_EQ(g.at(0, 0, 0), 0.7);
}

TEST(Voxelize, SamplesOneSpacingApartAreAdjacent) {
    ScatterField f;
    for (double x : {0.0, 0.25}) {
        DexSample s;
        s.position = Vec3(x, 0, 0);
        s.dex_norm = 1.0;
        f.samples.push_back(s);
    }
    update_bounds(f);
    const VoxelGrid g = voxelize(f, 0.25);
    EXPECT_EQ(g.dims(), (Index3{2, 1, 1}));
    EXPECT_EQ(g.at(0, 0, 0), 1.0);
    EXPECT_EQ(g.at(1, 0, 0), 1.0);
}

TEST(Voxelize, MatchesBruteForceRebinning) {
    std::mt19937_64 gen(31);
    for (int trial = 0; trial < 50; ++trial) {
        const ScatterField f = random_field(gen, 1 + trial * 20, 0.3);
        const double r = 0.02 + 0.01 * (trial % 7);
        EXPECT_EQ(voxelize(f, r), rebin_oracle(f, r)) << "trial " << trial;
    }
}

TEST(Voxelize, KeepsTheMaximumContribution) {
    std::mt19937_64 gen(32);
    const ScatterField f = random_field(gen, 1000, 0.1);
    const VoxelGrid g = voxelize(f, 0.03);
    double max_in = 0.0;
    for (const DexSample& s : f.samples) max_in = std::max(max_in, s.dex_norm);
    EXPECT_EQ(*std::max_element(g.values().begin(), g.values().end()), max_in);
    // A coarse voxel holding every sample keeps exactly the largest value.
    EXPECT_EQ(voxelize(f, 10.0).values(), std::vector<double>{max_in});
}

TEST(Voxelize, ThresholdCommutesForSingletonVoxels) {
    // Points on a jittered lattice of spacing 1 binned at r = 1 give one
    // sample per voxel.
    std::mt19937_64 gen(33);
    std::uniform_real_distribution<double> jitter(0.1, 0.9), dex(0.0, 1.0);
    ScatterField f;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 5; ++j)
            for (int k = 0; k < 4; ++k) {
                DexSample s;
                s.position = Vec3(i + jitter(gen), j + jitter(gen), k + jitter(gen));
                s.dex_norm = dex(gen);
                f.samples.push_back(s);
            }
    // Anchor the bounds on the lattice so both paths share it.
    DexSample lo, hi;
    lo.position = Vec3(0, 0, 0);
    hi.position = Vec3(6, 5, 4);
    lo.dex_norm = hi.dex_norm = 1.0;
    f.samples.push_back(lo);
    f.samples.push_back(hi);
    update_bounds(f);
    const double tau = 0.4;
    VoxelGrid zeroed = voxelize(f, 1.0);
    for (double& v : zeroed.values())
        if (v < tau) v = 0.0;
    EXPECT_EQ(voxelize(threshold_filter(f, tau), 1.0), zeroed);
}

TEST(GridVolume, Arithmetic) {
    EXPECT_EQ(grid_volume(VoxelGrid{}, 0.0), 0.0);
    VoxelGrid g(Vec3::Zero(), 0.01, {5, 5, 5});
    for (int i = 0; i < 10; ++i) g.values()[static_cast<std::size_t>(i * 7)] = 1.0;
    EXPECT_NEAR(grid_volume(g, 0.0), 1e-5, 1e-18);
    EXPECT_NEAR(grid_volume(g, 1.0), 1e-5, 1e-18);
}

TEST(GridVolume, MonotoneInTau) {
    std::mt19937_64 gen(34);
    const VoxelGrid g = voxelize(random_field(gen, 1000, 0.2), 0.02);
    double prev = grid_volume(g, 0.0);
    for (double tau = 0.05; tau <= 1.0; tau += 0.05) {
        const double v = grid_volume(g, tau);
        EXPECT_LE(v, prev);
        prev = v;
    }
}

TEST(GridVolume, SampledSphere) {
    std::mt19937_64 gen(35);
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    ScatterField f;
    while (f.samples.size() < 400000) {
        const Vec3 p(u(gen), u(gen), u(gen));
        if (p.norm() > 0.1) continue;
        DexSample s;
        s.position = p;
        s.dex_norm = 1.0;
        f.samples.push_back(s);
    }
    update_bounds(f);
    const double v = grid_volume(voxelize(f, 0.005), 0.0);
    const double exact = 4.0 / 3.0 * kPi * 1e-3;
    EXPECT_NEAR(v / exact, 1.0, 0.15);
}

TEST(NearestPairDistance, MatchesBruteForce) {
    std::mt19937_64 gen(36);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Vec3> pts;
        for (int i = 0; i < 300; ++i) pts.emplace_back(u(gen), u(gen) * 0.01 * (trial + 1), u(gen));
        pts.push_back(pts[5]);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                const double d = (pts[i] - pts[j]).norm();
                if (d > 0) best = std::min(best, d);
            }
        EXPECT_DOUBLE_EQ(nearest_pair_distance(pts), best);
    }
    const std::vector<Vec3> same(4, Vec3(1, 2, 3));
    EXPECT_EQ(nearest_pair_distance(same), 0.0);
}

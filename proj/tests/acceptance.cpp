// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances are the ones the criteria state; nothing is relaxed.

#include "ergoscope/cli.hpp"
#include "ergoscope/config.hpp"
#include "ergoscope/design.hpp"
#include "ergoscope/dexterity.hpp"
#include "ergoscope/interaction.hpp"
#include "ergoscope/kinematics.hpp"
#include "ergoscope/optimizer.hpp"
#include "ergoscope/workspace.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace ergoscope;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

JointVector random_q(std::mt19937_64& gen, const ManipulatorModel& m) {
    JointVector q{};
    for (std::size_t j = 0; j < kJointCount; ++j)
        q[j] = std::uniform_real_distribution<double>(m.link(j).theta_down, m.link(j).theta_up)(gen);
    return q;
}

ManipulatorModel random_model(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi), len(0.0, 0.5),
        off(-0.3, 0.3), half(0.3, std::numbers::pi);
    std::array<DhLink, kJointCount> links{};
    for (auto& l : links) {
        const double h = half(gen);
        l = {angle(gen), len(gen), off(gen), angle(gen), -h, h};
    }
    return ManipulatorModel(links, gen() % 2 ? DhConvention::Modified : DhConvention::Standard);
}

// Shared full-pipeline results at the default configuration.
struct PipelineRuns {
    EvaluationConfig cfg = default_run_config().evaluation();
    DesignPoint optimized{0.26, 0.18, 0.20};
    DesignPoint original{0.15, 0.15, 0.20};
    double f_opt = 0.0, f_orig = 0.0, t_opt = 0.0, t_orig = 0.0;

    void run() {
        auto t0 = std::chrono::steady_clock::now();
        f_opt = evaluate_design(optimized, cfg, Execution{0});
        t_opt = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        f_orig = evaluate_design(original, cfg, Execution{0});
        t_orig = seconds_since(t0);
    }
};

Outcome ordering(const PipelineRuns& r) {
    const double ratio = r.f_orig > 0.0 ? r.f_opt / r.f_orig : INFINITY;
    const bool fast = r.t_opt <= 120.0 && r.t_orig <= 120.0;
    return {r.f_opt > r.f_orig && ratio >= 2.0 && fast,
            fmt("F(0.26,0.18,0.20) = %.4f > F(0.15,0.15,0.20) = %.4f, ratio %.2f (need >= 2); "
                "%.1f s / %.1f s per evaluation (limit 120 s); reference values 0.0057 -> 0.2732",
                r.f_opt, r.f_orig, ratio, r.t_opt, r.t_orig)};
}

Outcome penalty_invariants() {
    std::mt19937_64 gen(2001);
    const ManipulatorModel m = master_manipulator();
    std::size_t failures = 0;
    const std::size_t n = 10000;
    for (std::size_t trial = 0; trial < n; ++trial) {
        JointVector q = random_q(gen, m);
        const double man = manipulability(geometric_jacobian(m, q));
        if (!(dexterity(m, q, {}) <= man)) ++failures;
        const double k1 = std::uniform_real_distribution<double>(1.0, 1e5)(gen);
        const double k2 = k1 * std::uniform_real_distribution<double>(1.0, 100.0)(gen);
        if (!(joint_limit_penalty(q, m, {k2}) >= joint_limit_penalty(q, m, {k1}))) ++failures;
        const std::size_t j = trial % kJointCount;
        q[j] = gen() % 2 ? m.link(j).theta_up : m.link(j).theta_down;
        if (dexterity(m, q, {}) != 0.0) ++failures;
    }
    return {failures == 0, fmt("%zu configurations x 3 invariants, %zu violations", n, failures)};
}

Outcome jacobian_fd() {
    std::mt19937_64 gen(2002);
    const double h = 1e-6;
    double worst = 0.0;
    for (int pair = 0; pair < 100; ++pair) {
        const ManipulatorModel m = random_model(gen);
        const JointVector q = random_q(gen, m);
        const Mat6 jac = geometric_jacobian(m, q);
        for (std::size_t j = 0; j < kJointCount; ++j) {
            JointVector qp = q, qm = q;
            qp[j] += h;
            qm[j] -= h;
            const Vec3 fd = (forward_kinematics(m, qp).position - forward_kinematics(m, qm).position) / (2 * h);
            worst = std::max(worst, (fd - jac.block<3, 1>(0, static_cast<int>(j))).cwiseAbs().maxCoeff());
        }
    }
    return {worst < 1e-6, fmt("100 random (model, q) pairs, max |error| = %.3e (limit 1e-6)", worst)};
}

Outcome fk_oracle() {
    // At q = 0 the twists +pi/2, -pi/2 between joints 2 and 3 cancel, so
    // both nonzero lengths lie along base x: p = (a3 + a4, 0, 0).
    double worst = 0.0;
    for (const auto& [a3, a4, expected] : {std::tuple{0.26, 0.18, 0.44}, std::tuple{0.15, 0.15, 0.30}}) {
        const Vec3 p = forward_kinematics(master_manipulator(a3, a4), JointVector{}).position;
        worst = std::max(worst, (p - Vec3(expected, 0.0, 0.0)).cwiseAbs().maxCoeff());
    }
    return {worst <= 1e-12, fmt("zero pose (0.44,0,0) and (0.30,0,0), max deviation %.1e (limit 1e-12)", worst)};
}

Outcome brute_force_equivalence() {
    std::mt19937_64 gen(2005);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<long> dim(1, 8), shift(-5, 5), sep(0, 9);
    int mismatches = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        // Voxelization against explicit floor re-binning.
        ScatterField f;
        const int n = 1 + static_cast<int>(u01(gen) * 999);
        for (int s = 0; s < n; ++s) {
            DexSample d;
            d.position = Vec3(u01(gen), u01(gen), u01(gen)) * 0.15;
            d.dex_norm = u01(gen);
            f.samples.push_back(d);
        }
        update_bounds(f);
        const double r = 0.02;
        const VoxelGrid v = voxelize(f, r);
        Index3 dims{};
        for (int a = 0; a < 3; ++a) dims[a] = static_cast<long>(std::floor((f.bounds_upper[a] - f.bounds_lower[a]) / r)) + 1;
        std::vector<double> expect(static_cast<std::size_t>(dims[0] * dims[1] * dims[2]), 0.0);
        for (const DexSample& d : f.samples) {
            long idx[3];
            for (int a = 0; a < 3; ++a)
                idx[a] = std::min(dims[a] - 1, static_cast<long>(std::floor((d.position[a] - f.bounds_lower[a]) / r)));
            double& cell = expect[static_cast<std::size_t>((idx[0] * dims[1] + idx[1]) * dims[2] + idx[2])];
            cell = std::max(cell, d.dex_norm);
        }
        if (v.dims() != dims || v.values() != expect) ++mismatches;

        // Dual-arm composition against a triple loop over output labels.
        VoxelGrid g(Vec3::Zero(), r, {dim(gen), dim(gen), dim(gen)});
        for (double& x : g.values()) x = u01(gen) < 0.5 ? u01(gen) : 0.0;
        const DualArmLayout layout{Vec3(shift(gen), shift(gen), shift(gen)) * r, sep(gen) * r, 0.5};
        const VoxelGrid dual = combine_dual_arm(g, layout);
        const long rx = std::lround(layout.R.x() / r), ry = std::lround(layout.R.y() / r),
                   rz = std::lround(layout.R.z() / r), d = std::lround(layout.D / r);
        const long lox = std::min(rx, rx - d), hix = std::max(rx, rx - d) + g.dims()[0] - 1;
        const Index3 want_dims{hix - lox + 1, g.dims()[1], g.dims()[2]};
        bool same = dual.dims() == want_dims;
        for (long i = 0; same && i < want_dims[0]; ++i)
            for (long j = 0; j < want_dims[1]; ++j)
                for (long k = 0; k < want_dims[2]; ++k) {
                    const long I = i + lox, J = j + ry, K = k + rz;
                    const double want = std::min(1.0, 0.5 * (g.value_or_zero(I - rx, J - ry, K - rz) +
                                                             g.value_or_zero(I + d - rx, J - ry, K - rz)));
                    if (dual.at(i, j, k) != want) same = false;
                }
        if (!same) ++mismatches;

        // Interaction score against a triple loop.
        EhemField el{VoxelGrid(dual.origin(), r, dual.dims())}, er = el;
        for (double& x : el.grid.values()) x = u01(gen) < 0.4 ? kErgonomicIndex : 0.0;
        for (double& x : er.grid.values()) x = u01(gen) < 0.4 ? kErgonomicIndex : 0.0;
        double want = 0.0;
        for (long i = 0; i < dual.dims()[0]; ++i)
            for (long j = 0; j < dual.dims()[1]; ++j)
                for (long k = 0; k < dual.dims()[2]; ++k)
                    want += (el.grid.at(i, j, k) + er.grid.at(i, j, k)) * dual.at(i, j, k);
        if (ergonomic_interaction_score(el, er, dual) != want) ++mismatches;
    }
    return {mismatches == 0, fmt("%d random cases each of voxelize / combine_dual_arm / score, %d mismatches",
                                 trials, mismatches)};
}

Outcome stability(const PipelineRuns& r) {
    EvaluationConfig doubled = r.cfg;
    doubled.n_samples = 2 * r.cfg.n_samples;
    const double f_opt = evaluate_design(r.optimized, doubled, Execution{0});
    const double f_orig = evaluate_design(r.original, doubled, Execution{0});
    const double rel_opt = std::abs(f_opt - r.f_opt) / r.f_opt;
    const double rel_orig = std::abs(f_orig - r.f_orig) / r.f_orig;
    return {rel_opt < 0.10 && rel_orig < 0.10,
            fmt("n 2e5 -> 4e5: optimized F %.4f -> %.4f (%.1f%%), original F %.4f -> %.4f (%.1f%%); limit 10%%",
                r.f_opt, f_opt, 100 * rel_opt, r.f_orig, f_orig, 100 * rel_orig)};
}

Outcome isosurface_sphere() {
    const double R = 0.1, h = R / 20;
    const Vec3 c(0.02, -0.01, 0.03);
    const long n = 2 * 24 + 1;
    const VoxelGrid proto(c - Vec3::Constant(24 * h), h, {n, n, n});
    VoxelGrid g = proto;
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            for (long k = 0; k < n; ++k) g.at(i, j, k) = 1.0 - (g.center(i, j, k) - c).norm() / R;
    const TriangleMesh m = extract_isosurface(g, 0.5);
    const double exact = 4.0 * std::numbers::pi * (R / 2) * (R / 2);
    const double rel = std::abs(m.area() - exact) / exact;
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> edges;
    for (const auto& t : m.triangles)
        for (int e = 0; e < 3; ++e) ++edges[std::minmax(t[e], t[(e + 1) % 3])];
    std::size_t bad_edges = 0;
    for (const auto& [edge, count] : edges) bad_edges += count != 2;
    return {rel <= 0.15 && bad_edges == 0 && !m.empty(),
            fmt("area %.6f vs %.6f (%.2f%%, limit 15%%); %zu triangles, %zu edges not on exactly 2 triangles",
                m.area(), exact, 100 * rel, m.triangles.size(), bad_edges)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / ("ergoscope_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    const fs::path configs = fs::path(ERGOSCOPE_SOURCE_DIR) / "configs";
    struct Case {
        std::string command;
        fs::path config;
    };
    const std::vector<Case> cases{{"evaluate", configs / "optimized_design.json"}, {"optimize", configs / "quick.json"}};
    std::size_t compared = 0, differing = 0;
    std::string failed;
    for (const Case& c : cases) {
        std::vector<fs::path> dirs;
        for (const char* run : {"w1a", "w1b", "w8"}) {
            const fs::path dir = root / (c.command + "_" + run);
            const std::string workers = std::string(run) == "w8" ? "8" : "1";
            const std::string config = c.config.string(), out = dir.string();
            const char* argv[] = {"ergoscope", c.command.c_str(), "--config", config.c_str(),
                                  "--out", out.c_str(), "--workers", workers.c_str()};
            const int code = cli_main(8, argv);
            if (code != 0) failed += " " + c.command + "/" + run + " exit " + std::to_string(code);
            dirs.push_back(dir);
        }
        for (const auto& e : fs::directory_iterator(dirs[0])) {
            const std::string bytes = slurp(e.path());
            for (std::size_t d = 1; d < dirs.size(); ++d) {
                ++compared;
                if (slurp(dirs[d] / e.path().filename()) != bytes) ++differing;
            }
        }
    }
    fs::remove_all(root);
    return {failed.empty() && differing == 0 && compared >= 8,
            fmt("evaluate + optimize at workers 1, 1, 8: %zu artifact comparisons, %zu differ%s", compared,
                differing, failed.c_str())};
}

Outcome surrogate_optimum() {
    const std::vector<DesignPoint> targets{{0.213, 0.167, 0.331}, {0.1, 0.35, 0.08}, {0.37, 0.06, 0.45},
                                           {0.25, 0.25, 0.27}, {0.071, 0.292, 0.188}};
    double worst = 0.0;
    std::size_t max_evals = 0;
    for (const DesignPoint& t : targets) {
        OptimizationProblem p;
        p.strategy = Strategy::GridThenNelderMead;
        p.budget = 400;
        const auto r = optimize(p, [&](const DesignPoint& x) {
            return std::exp(-(std::pow(x.a3 - t.a3, 2) + std::pow(x.a4 - t.a4, 2) + std::pow(x.D - t.D, 2)));
        });
        worst = std::max({worst, std::abs(r.best.a3 - t.a3), std::abs(r.best.a4 - t.a4), std::abs(r.best.D - t.D)});
        max_evals = std::max(max_evals, r.evaluations);
    }
    return {worst <= 0.01 && max_evals <= 400,
            fmt("%zu interior optima, worst coordinate error %.2e m (limit 0.01), at most %zu evaluations (budget 400)",
                targets.size(), worst, max_evals)};
}

}  // namespace

int main() {
    PipelineRuns runs;
    bool pipeline_ok = true;
    std::string pipeline_error;
    try {
        runs.run();
    } catch (const std::exception& e) {
        pipeline_ok = false;
        pipeline_error = e.what();
    }

    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"design ordering", [&] { return pipeline_ok ? ordering(runs) : Outcome{false, pipeline_error}; }},
        {"dexterity invariants", penalty_invariants},
        {"jacobian finite differences", jacobian_fd},
        {"forward kinematics oracle", fk_oracle},
        {"brute-force equivalence", brute_force_equivalence},
        {"monte carlo stability", [&] { return pipeline_ok ? stability(runs) : Outcome{false, pipeline_error}; }},
        {"isosurface geometry", isosurface_sphere},
        {"determinism", determinism},
        {"surrogate optimum", surrogate_optimum},
    };

    int failures = 0;
    for (std::size_t n = 0; n < criteria.size(); ++n) {
        Outcome o;
        try {
            o = criteria[n].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s  criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", n + 1, criteria[n].first,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}

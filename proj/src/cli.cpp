#include "ergoscope/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

namespace ergoscope {

namespace fs = std::filesystem;

ArtifactWriter::ArtifactWriter(fs::path directory) : directory_(std::move(directory)) {}

fs::path ArtifactWriter::write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    if (name.empty() || name.find('/') != std::string::npos || name.find('\\') != std::string::npos ||
        name == "." || name == "..") {
        throw InvalidInput("artifact name '" + name + "' must be a plain file name");
    }
    fs::create_directories(directory_);
    const fs::path target = directory_ / name;
    const fs::path temp = directory_ / (name + ".partial");
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open '" + temp.string() + "' for writing");
        try {
            body(out);
        } catch (...) {
            out.close();
            std::error_code ec;
            fs::remove(temp, ec);
            throw;
        }
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(temp, ec);
            throw Error("failed writing '" + target.string() + "'");
        }
    }
    fs::rename(temp, target);
    written_.push_back(target);
    return target;
}

void ArtifactWriter::rollback() noexcept {
    for (const fs::path& p : written_) {
        std::error_code ec;
        fs::remove(p, ec);
    }
    written_.clear();
}

namespace {

std::string num(double v) { return format_number(v, 9); }

std::string vec(const Vec3& v) { return num(v.x()) + " " + num(v.y()) + " " + num(v.z()); }

void write_parameters(std::ostream& out, const RunConfig& cfg) {
    out << "[parameters]\n";
    out << "K = " << num(cfg.dexterity.K) << '\n';
    out << "tau = " << num(cfg.tau) << '\n';
    out << "n_samples = " << cfg.n_samples << '\n';
    out << "r = " << num(cfg.r) << (cfg.r_auto ? " (auto)" : "") << '\n';
    out << "ehem_samples = " << cfg.ehem_samples << '\n';
    out << "mirror_plane_y = " << num(cfg.mirror_plane_y) << '\n';
    out << "R = " << vec(cfg.layout.R) << '\n';
    out << "alpha = " << num(cfg.layout.alpha) << '\n';
    out << "binarize = " << (cfg.binarize ? "true" : "false") << '\n';
    out << "interaction_tau = " << num(cfg.interaction_tau) << '\n';
    out << "dh_convention = "
        << (cfg.manipulator.convention() == DhConvention::Modified ? "modified" : "standard") << '\n';
}

void write_dh_table(std::ostream& out, const ManipulatorModel& model) {
    out << "[dh_table]\n";
    out << std::left << std::setw(8) << "link";
    for (int j = 1; j <= 6; ++j) out << std::right << std::setw(12) << j;
    out << '\n';
    auto row = [&](const char* name, auto get) {
        out << std::left << std::setw(8) << name;
        for (const DhLink& l : model.links()) out << std::right << std::setw(12) << num(get(l));
        out << '\n';
    };
    row("alpha", [](const DhLink& l) { return l.alpha; });
    row("a", [](const DhLink& l) { return l.a; });
    row("d", [](const DhLink& l) { return l.d; });
    row("offset", [](const DhLink& l) { return l.theta_offset; });
    row("down", [](const DhLink& l) { return l.theta_down; });
    row("up", [](const DhLink& l) { return l.theta_up; });
}

}  // namespace

std::string format_evaluation_report(const DesignEvaluation& e, const RunConfig& cfg,
                                     const Provenance& prov) {
    std::ostringstream out;
    out << "# ergoscope evaluation report\n# " << prov.line() << '\n';
    out << "[design]\n";
    out << "a3 = " << num(e.point.a3) << "\na4 = " << num(e.point.a4) << "\nD = " << num(e.point.D) << '\n';
    out << "[result]\n";
    out << "F = " << num(e.interaction.F) << '\n';
    out << "V_I = " << num(e.interaction.V_I) << " m^3\n";
    out << "V_R = " << num(e.interaction.V_R) << " m^3\n";
    out << "score = " << num(e.interaction.score) << '\n';
    out << "voxels_interaction = " << e.interaction.v_interaction.count_above(0.0) << '\n';
    out << "voxels_dual = " << e.interaction.v_dual.count_above(0.0) << '\n';
    out << "voxels_single_arm = " << e.robot_grid.count_above(0.0) << '\n';
    out << "voxels_ehem_left = " << e.e_left.occupied() << '\n';
    out << "voxels_ehem_right = " << e.e_right.occupied() << '\n';
    out << "ehem_samples_discarded = " << e.e_left.samples_discarded + e.e_right.samples_discarded << '\n';
    out << "samples_total = " << e.samples_total << '\n';
    out << "samples_kept = " << e.samples_kept << '\n';
    out << "dex_max = " << format_number(e.dex_max, 17) << '\n';
    out << "resolution = " << num(e.resolution) << '\n';
    write_parameters(out, cfg);
    write_dh_table(out, cfg.manipulator.with_link_lengths(e.point.a3, e.point.a4));
    return out.str();
}

std::string format_optimization_report(const OptimizationResult& result, const RunConfig& cfg,
                                       const Provenance& prov) {
    std::ostringstream out;
    const OptimizationProblem& p = cfg.optimize;
    out << "# ergoscope optimization report\n# " << prov.line() << '\n';
    out << "[problem]\n";
    out << "strategy = " << to_string(p.strategy) << '\n';
    out << "budget = " << p.budget << '\n';
    out << "grid_points = " << p.grid_points << '\n';
    out << "xtol = " << num(p.xtol) << '\n';
    out << "seed_repeats = " << cfg.seed_repeats << '\n';
    out << "bounds_a3 = " << num(p.bounds.a3.lower) << ' ' << num(p.bounds.a3.upper) << '\n';
    out << "bounds_a4 = " << num(p.bounds.a4.lower) << ' ' << num(p.bounds.a4.upper) << '\n';
    out << "bounds_D = " << num(p.bounds.D.lower) << ' ' << num(p.bounds.D.upper) << '\n';
    out << "[history]\n";
    out << std::right << std::setw(6) << "eval" << std::setw(14) << "a3" << std::setw(14) << "a4"
        << std::setw(14) << "D" << std::setw(14) << "F" << std::setw(14) << "best_F" << '\n';
    double running = 0.0;
    for (std::size_t n = 0; n < result.history.size(); ++n) {
        const HistoryEntry& h = result.history[n];
        running = n == 0 ? h.F : std::max(running, h.F);
        out << std::setw(6) << n + 1 << std::setw(14) << num(h.point.a3) << std::setw(14) << num(h.point.a4)
            << std::setw(14) << num(h.point.D) << std::setw(14) << num(h.F) << std::setw(14) << num(running)
            << '\n';
    }
    out << "[result]\n";
    out << "best_a3 = " << num(result.best.a3) << '\n';
    out << "best_a4 = " << num(result.best.a4) << '\n';
    out << "best_D = " << num(result.best.D) << '\n';
    out << "best_F = " << num(result.best_F) << '\n';
    out << "evaluations = " << result.evaluations << '\n';
    out << "truncated = " << (result.truncated ? "true" : "false") << '\n';
    write_parameters(out, cfg);
    write_dh_table(out, cfg.manipulator.with_link_lengths(result.best.a3, result.best.a4));
    return out.str();
}

namespace {

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    bool print_config = false;
    unsigned workers = 0;
    std::optional<std::string> grid;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config, "Run configuration (JSON)")->required();
    cmd->add_option("--seed", o.seed, "Override sampling.seed");
    cmd->add_option("--out", o.out, "Override output.directory");
    cmd->add_flag("--print-config", o.print_config, "Print the effective configuration and exit");
    cmd->add_option("--workers", o.workers, "Worker threads (0 = all cores); results do not depend on it");
}

ScatterField filtered_scatter(const RunConfig& cfg, const Execution& exec) {
    const ScatterField scatter = sample_workspace(cfg.manipulator, cfg.n_samples, cfg.seed, cfg.dexterity, exec);
    return threshold_filter(scatter, cfg.tau);
}

double resolution_for(const RunConfig& cfg, const ScatterField& kept) {
    if (!cfg.r_auto) return cfg.r;
    std::vector<Vec3> pts;
    pts.reserve(kept.samples.size());
    for (const auto& s : kept.samples) pts.push_back(s.position);
    const double r = pts.size() > 1 ? nearest_pair_distance(pts) : 0.0;
    if (!(r > 0.0)) throw DegenerateWorkspace("automatic resolution is zero: all kept samples coincide");
    return r;
}

VoxelGrid workspace_grid(const RunConfig& cfg, const Execution& exec) {
    const ScatterField kept = filtered_scatter(cfg, exec);
    VoxelGrid grid = voxelize(kept, resolution_for(cfg, kept));
    return grid;
}

void write_meshes(ArtifactWriter& writer, const TriangleMesh& mesh, const RunConfig& cfg,
                  const Provenance& prov) {
    for (const std::string& fmt : cfg.output.mesh_formats) {
        if (fmt == "ply") writer.write("isosurface.ply", [&](std::ostream& o) { write_ply(o, mesh, prov); });
        if (fmt == "obj") writer.write("isosurface.obj", [&](std::ostream& o) { write_obj(o, mesh, prov); });
    }
}

int run_command(const std::string& command, const CommonOptions& opts) {
    RunConfig cfg = load_config(opts.config);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.out) cfg.output.directory = *opts.out;
    if (opts.print_config) {
        std::cout << dump_config(cfg);
        return kExitOk;
    }
    const Execution exec{opts.workers};
    const Provenance prov{config_hash(cfg), cfg.seed};
    ArtifactWriter writer(cfg.output.directory);

    try {
        if (command == "sample") {
            const ScatterField scatter =
                sample_workspace(cfg.manipulator, cfg.n_samples, cfg.seed, cfg.dexterity, exec);
            writer.write("scatter.csv", [&](std::ostream& o) { write_scatter_csv(o, scatter, prov); });
        } else if (command == "voxelize") {
            const VoxelGrid grid = workspace_grid(cfg, exec);
            VoxelGrid single = grid;
            if (cfg.binarize) {
                for (double& v : single.values()) v = v > 0.0 ? 1.0 : 0.0;
            }
            const VoxelGrid dual = combine_dual_arm(single, cfg.layout);
            writer.write("workspace.grid", [&](std::ostream& o) { write_grid(o, grid, prov); });
            writer.write("dual_workspace.grid", [&](std::ostream& o) { write_grid(o, dual, prov); });
        } else if (command == "isosurface") {
            VoxelGrid grid;
            if (opts.grid) {
                std::ifstream in(*opts.grid);
                if (!in) throw Error("cannot open grid file '" + *opts.grid + "'");
                grid = read_grid(in);
            } else {
                grid = workspace_grid(cfg, exec);
            }
            const TriangleMesh mesh = extract_isosurface(grid, cfg.isovalue);
            if (mesh.empty()) {
                std::cerr << "warning: no voxel crosses isovalue " << num(cfg.isovalue)
                          << "; writing an empty mesh\n";
            }
            write_meshes(writer, mesh, cfg, prov);
        } else if (command == "ehem") {
            const EhemModel right = mirror_ehem(cfg.ehem, cfg.mirror_plane_y);
            const auto [l_lo, l_hi] = cfg.ehem.bounding_box();
            const auto [r_lo, r_hi] = right.bounding_box();
            const Vec3 lo = l_lo.cwiseMin(r_lo), hi = l_hi.cwiseMax(r_hi);
            Index3 dims{};
            for (int a = 0; a < 3; ++a) dims[a] = static_cast<long>(std::ceil((hi[a] - lo[a]) / cfg.r)) + 1;
            const VoxelGrid lattice(lo, cfg.r, dims);
            const EhemField left_field = sample_ehem(cfg.ehem, cfg.ehem_samples, cfg.seed, lattice, exec);
            const EhemField right_field = sample_ehem(right, cfg.ehem_samples, cfg.seed, lattice, exec);
            for (const EhemField* f : {&left_field, &right_field}) {
                if (f->occupied() == 0) std::cerr << "warning: an EHEM arm has no in-bounds samples\n";
            }
            writer.write("ehem_left.grid", [&](std::ostream& o) { write_grid(o, left_field.grid, prov); });
            writer.write("ehem_right.grid", [&](std::ostream& o) { write_grid(o, right_field.grid, prov); });
        } else if (command == "evaluate") {
            const DesignEvaluation eval = evaluate_design_detailed(cfg.design(), cfg.evaluation(), cfg.seed, exec);
            if (eval.degenerate) throw DegenerateWorkspace(eval.warning);
            writer.write("evaluate_report.txt",
                         [&](std::ostream& o) { o << format_evaluation_report(eval, cfg, prov); });
            writer.write("interaction.grid",
                         [&](std::ostream& o) { write_grid(o, eval.interaction.v_interaction, prov); });
            std::cout << "F = " << num(eval.interaction.F) << "  V_I = " << num(eval.interaction.V_I)
                      << " m^3  V_R = " << num(eval.interaction.V_R) << " m^3\n";
        } else if (command == "optimize") {
            const EvaluationConfig eval_cfg = cfg.evaluation();
            const OptimizationResult result = optimize(
                cfg.optimize, [&](const DesignPoint& p) { return evaluate_design(p, eval_cfg, exec); });
            writer.write("optimize_report.txt",
                         [&](std::ostream& o) { o << format_optimization_report(result, cfg, prov); });
            const DesignEvaluation best = evaluate_design_detailed(result.best, eval_cfg, cfg.seed, exec);
            if (!best.degenerate) {
                writer.write("best_design_report.txt",
                             [&](std::ostream& o) { o << format_evaluation_report(best, cfg, prov); });
                writer.write("best_interaction.grid",
                             [&](std::ostream& o) { write_grid(o, best.interaction.v_interaction, prov); });
            }
            std::cout << "best a3 = " << num(result.best.a3) << "  a4 = " << num(result.best.a4)
                      << "  D = " << num(result.best.D) << "  F = " << num(result.best_F) << '\n';
        } else {
            throw InvalidInput("unknown command '" + command + "'");
        }
    } catch (...) {
        writer.rollback();
        throw;
    }
    return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Dexterous and ergonomic workspace analysis of dual master manipulators", "ergoscope"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    CommonOptions opts;
    const std::vector<std::pair<const char*, const char*>> commands{
        {"sample", "Monte Carlo dexterity samples (scatter.csv)"},
        {"voxelize", "Single- and dual-arm dexterous voxel grids"},
        {"isosurface", "Isosurface mesh of the dexterous workspace (PLY/OBJ)"},
        {"ehem", "Ergonomic occupancy grids of both arms"},
        {"evaluate", "Interaction workspace report for the configured design"},
        {"optimize", "Search a3, a4 and D for the largest interaction fraction F"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* cmd = app.add_subcommand(name, help);
        add_common(cmd, opts);
        if (std::string(name) == "isosurface") {
            cmd->add_option("--grid", opts.grid, "Read the field from a grid file instead of sampling");
        }
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitFailure;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run_command(command, opts);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DegenerateWorkspace& e) {
        std::cerr << "error: degenerate workspace: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const DegenerateErgonomicModel& e) {
        std::cerr << "error: degenerate ergonomic model: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const NumericalFailure& e) {
        std::cerr << "error: numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace ergoscope

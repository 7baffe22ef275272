#include "ergoscope/cli.hpp"
#include "ergoscope/config.hpp"
#include "ergoscope/design.hpp"
#include "ergoscope/dexterity.hpp"
#include "ergoscope/ehem.hpp"
#include "ergoscope/interaction.hpp"
#include "ergoscope/kinematics.hpp"
#include "ergoscope/optimizer.hpp"
#include "ergoscope/workspace.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace ergoscope;

namespace {

py::array_t<double> grid_values(const VoxelGrid& g) {
    const auto& d = g.dims();
    py::array_t<double> out({d[0], d[1], d[2]});
    std::copy(g.values().begin(), g.values().end(), out.mutable_data());
    return out;
}

VoxelGrid grid_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& values,
                          const Vec3& origin, double resolution) {
    if (values.ndim() != 3) throw InvalidInput("grid values must be a 3-D array");
    VoxelGrid g(origin, resolution, {static_cast<long>(values.shape(0)), static_cast<long>(values.shape(1)),
                                     static_cast<long>(values.shape(2))});
    std::copy(values.data(), values.data() + values.size(), g.values().begin());
    return g;
}

}  // namespace

PYBIND11_MODULE(_ergoscope, m) {
    m.doc() = "Dexterous and ergonomic workspace analysis of dual master manipulators";
    m.attr("__version__") = kVersion;

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<DegenerateWorkspace>(m, "DegenerateWorkspace", PyExc_RuntimeError);
    py::register_exception<DegenerateErgonomicModel>(m, "DegenerateErgonomicModel", PyExc_RuntimeError);
    py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_ArithmeticError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::enum_<DhConvention>(m, "DhConvention")
        .value("standard", DhConvention::Standard)
        .value("modified", DhConvention::Modified);

    py::class_<DhLink>(m, "DhLink")
        .def(py::init<>())
        .def(py::init([](double alpha, double a, double d, double theta_offset, double theta_down, double theta_up) {
                 return DhLink{alpha, a, d, theta_offset, theta_down, theta_up};
             }),
             py::arg("alpha"), py::arg("a"), py::arg("d") = 0.0, py::arg("theta_offset") = 0.0,
             py::arg("theta_down") = 0.0, py::arg("theta_up") = 0.0)
        .def_readwrite("alpha", &DhLink::alpha)
        .def_readwrite("a", &DhLink::a)
        .def_readwrite("d", &DhLink::d)
        .def_readwrite("theta_offset", &DhLink::theta_offset)
        .def_readwrite("theta_down", &DhLink::theta_down)
        .def_readwrite("theta_up", &DhLink::theta_up);

    py::class_<ManipulatorModel>(m, "ManipulatorModel")
        .def(py::init([](const std::vector<DhLink>& links, DhConvention conv) { return ManipulatorModel(links, conv); }),
             py::arg("links"), py::arg("convention") = DhConvention::Modified)
        .def_property_readonly("links", [](const ManipulatorModel& self) {
            return std::vector<DhLink>(self.links().begin(), self.links().end());
        })
        .def_property_readonly("convention", &ManipulatorModel::convention)
        .def("with_link_lengths", &ManipulatorModel::with_link_lengths, py::arg("a3"), py::arg("a4"));

    m.def("master_manipulator", &master_manipulator, py::arg("a3") = 0.26, py::arg("a4") = 0.18,
          py::arg("convention") = DhConvention::Modified);
    m.def(
        "forward_kinematics",
        [](const ManipulatorModel& model, const std::vector<double>& q) {
            const Pose p = forward_kinematics(model, q);
            return py::make_tuple(p.position, p.orientation);
        },
        py::arg("model"), py::arg("q"), "Returns (position, rotation matrix).");
    m.def(
        "geometric_jacobian",
        [](const ManipulatorModel& model, const std::vector<double>& q) { return geometric_jacobian(model, q); },
        py::arg("model"), py::arg("q"));
    m.def(
        "dexterity",
        [](const ManipulatorModel& model, const std::vector<double>& q, double K) {
            return dexterity(model, q, DexterityConfig{K});
        },
        py::arg("model"), py::arg("q"), py::arg("K") = 1e5);
    m.def(
        "joint_limit_penalty",
        [](const ManipulatorModel& model, const std::vector<double>& q, double K) {
            return joint_limit_penalty(q, model, DexterityConfig{K});
        },
        py::arg("model"), py::arg("q"), py::arg("K") = 1e5);
    m.def("manipulability", [](const Eigen::MatrixXd& j) { return manipulability(j); }, py::arg("jacobian"));

    m.def(
        "sample_workspace",
        [](const ManipulatorModel& model, std::size_t n, std::uint64_t seed, double K, unsigned workers) {
            ScatterField f;
            {
                py::gil_scoped_release release;
                f = sample_workspace(model, n, seed, DexterityConfig{K}, Execution{workers});
            }
            py::array_t<double> pos({static_cast<py::ssize_t>(f.samples.size()), py::ssize_t{3}});
            py::array_t<double> raw(static_cast<py::ssize_t>(f.samples.size()));
            py::array_t<double> norm(static_cast<py::ssize_t>(f.samples.size()));
            auto p = pos.mutable_unchecked<2>();
            for (std::size_t i = 0; i < f.samples.size(); ++i) {
                for (int a = 0; a < 3; ++a) p(static_cast<py::ssize_t>(i), a) = f.samples[i].position[a];
                raw.mutable_data()[i] = f.samples[i].dex_raw;
                norm.mutable_data()[i] = f.samples[i].dex_norm;
            }
            return py::dict(py::arg("positions") = pos, py::arg("dex_raw") = raw, py::arg("dex_norm") = norm);
        },
        py::arg("model"), py::arg("n_samples"), py::arg("seed") = 1, py::arg("K") = 1e5, py::arg("workers") = 0,
        "Monte Carlo samples as numpy arrays: positions (n, 3), dex_raw, dex_norm.");

    m.def(
        "extract_isosurface",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& values, const Vec3& origin,
           double resolution, double isovalue) {
            const TriangleMesh mesh = extract_isosurface(grid_from_array(values, origin, resolution), isovalue);
            py::array_t<double> v({static_cast<py::ssize_t>(mesh.vertices.size()), py::ssize_t{3}});
            py::array_t<std::uint32_t> f({static_cast<py::ssize_t>(mesh.triangles.size()), py::ssize_t{3}});
            for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
                for (int a = 0; a < 3; ++a) v.mutable_data()[3 * i + a] = mesh.vertices[i][a];
            for (std::size_t i = 0; i < mesh.triangles.size(); ++i)
                for (int a = 0; a < 3; ++a) f.mutable_data()[3 * i + a] = mesh.triangles[i][a];
            return py::make_tuple(v, f);
        },
        py::arg("values"), py::arg("origin"), py::arg("resolution"), py::arg("isovalue"),
        "Marching-cubes mesh (vertices, triangles) of a k-fastest 3-D array whose voxel (0,0,0) is centered at origin.");

    py::class_<RunConfig>(m, "RunConfig")
        .def_readwrite("n_samples", &RunConfig::n_samples)
        .def_readwrite("seed", &RunConfig::seed)
        .def_readwrite("r", &RunConfig::r)
        .def_readwrite("tau", &RunConfig::tau)
        .def_readwrite("ehem_samples", &RunConfig::ehem_samples)
        .def_readwrite("mirror_plane_y", &RunConfig::mirror_plane_y)
        .def_property_readonly("design", [](const RunConfig& c) {
            const DesignPoint p = c.design();
            return py::make_tuple(p.a3, p.a4, p.D);
        })
        .def("dump", &dump_config)
        .def("hash", &config_hash)
        .def("__eq__", [](const RunConfig& a, const RunConfig& b) { return a == b; });

    m.def("default_config", &default_run_config);
    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("load_config", &load_config, py::arg("path"));

    m.def(
        "evaluate_design",
        [](double a3, double a4, double D, const RunConfig& cfg, unsigned workers) {
            DesignEvaluation e;
            {
                py::gil_scoped_release release;
                e = evaluate_design_detailed({a3, a4, D}, cfg.evaluation(), cfg.seed, Execution{workers});
            }
            py::dict out;
            out["degenerate"] = e.degenerate;
            out["warning"] = e.warning;
            out["F"] = e.degenerate ? 0.0 : e.interaction.F;
            out["V_I"] = e.interaction.V_I;
            out["V_R"] = e.interaction.V_R;
            out["score"] = e.interaction.score;
            out["samples_kept"] = e.samples_kept;
            if (!e.degenerate) {
                out["origin"] = e.interaction.v_dual.origin();
                out["resolution"] = e.interaction.v_dual.resolution();
                out["v_dual"] = grid_values(e.interaction.v_dual);
                out["v_interaction"] = grid_values(e.interaction.v_interaction);
                out["e_left"] = grid_values(e.e_left.grid);
                out["e_right"] = grid_values(e.e_right.grid);
            }
            return out;
        },
        py::arg("a3"), py::arg("a4"), py::arg("D"), py::arg("config"), py::arg("workers") = 0,
        "Full pipeline for one design; returns F, V_I, V_R, score and the grids as numpy arrays.");

    m.def(
        "optimize",
        [](const std::function<double(double, double, double)>& objective, std::tuple<double, double> a3,
           std::tuple<double, double> a4, std::tuple<double, double> D, const std::string& strategy,
           std::size_t budget, std::size_t grid_points) {
            OptimizationProblem p;
            p.bounds = {{std::get<0>(a3), std::get<1>(a3)}, {std::get<0>(a4), std::get<1>(a4)},
                        {std::get<0>(D), std::get<1>(D)}};
            p.strategy = parse_strategy(strategy);
            p.budget = budget;
            p.grid_points = grid_points;
            const OptimizationResult r =
                optimize(p, [&](const DesignPoint& x) { return objective(x.a3, x.a4, x.D); });
            py::list history;
            for (const HistoryEntry& h : r.history) history.append(py::make_tuple(h.point.a3, h.point.a4, h.point.D, h.F));
            return py::dict(py::arg("best") = py::make_tuple(r.best.a3, r.best.a4, r.best.D),
                            py::arg("best_F") = r.best_F, py::arg("evaluations") = r.evaluations,
                            py::arg("truncated") = r.truncated, py::arg("history") = history);
        },
        py::arg("objective"), py::arg("a3") = std::tuple{0.05, 0.40}, py::arg("a4") = std::tuple{0.05, 0.40},
        py::arg("D") = std::tuple{0.05, 0.50}, py::arg("strategy") = "grid_then_nelder_mead",
        py::arg("budget") = 800, py::arg("grid_points") = 9,
        "Maximizes objective(a3, a4, D) over the bounds.");

    m.def(
        "main",
        [](const std::vector<std::string>& args) {
            std::vector<const char*> argv{"ergoscope"};
            for (const auto& a : args) argv.push_back(a.c_str());
            return cli_main(static_cast<int>(argv.size()), argv.data());
        },
        py::arg("args"), "Runs the command-line tool in-process and returns its exit code.");
}

#include "ergoscope/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace ergoscope {

namespace {

using Json = nlohmann::ordered_json;
using Kind = ConfigError::Kind;

// Read-side view of one JSON object: typed accessors record which keys
// were consumed so leftovers can be reported as unknown.
class Section {
public:
    Section(const Json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) throw ConfigError(Kind::Schema, path_, "expected an object");
    }

    ~Section() = default;

    bool has(const std::string& key) {
        seen_.insert(key);
        return node_.contains(key);
    }

    std::string child_path(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    const Json& raw(const std::string& key) {
        seen_.insert(key);
        return node_.at(key);
    }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        return as_number(raw(key), child_path(key));
    }

    double required_number(const std::string& key) {
        if (!has(key)) throw ConfigError(Kind::Schema, child_path(key), "required field is missing");
        return as_number(raw(key), child_path(key));
    }

    std::uint64_t count(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        const Json& v = raw(key);
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
            return static_cast<std::uint64_t>(v.get<std::int64_t>());
        }
        throw ConfigError(Kind::Schema, child_path(key), "expected a nonnegative integer");
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const Json& v = raw(key);
        if (!v.is_boolean()) throw ConfigError(Kind::Schema, child_path(key), "expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        const Json& v = raw(key);
        if (!v.is_string()) throw ConfigError(Kind::Schema, child_path(key), "expected a string");
        return v.get<std::string>();
    }

    Vec3 vec3(const std::string& key, const Vec3& fallback) {
        if (!has(key)) return fallback;
        return as_vec3(raw(key), child_path(key));
    }

    Interval interval(const std::string& key, const Interval& fallback) {
        if (!has(key)) return fallback;
        const Json& v = raw(key);
        const std::string p = child_path(key);
        if (!v.is_array() || v.size() != 2) throw ConfigError(Kind::Schema, p, "expected [lower, upper]");
        Interval iv{as_number(v[0], p + "[0]"), as_number(v[1], p + "[1]")};
        if (iv.lower > iv.upper) throw ConfigError(Kind::Invariant, p, "lower bound exceeds upper bound");
        return iv;
    }

    /// Throws for any key no accessor asked about.
    void finish() const {
        for (const auto& [key, value] : node_.items()) {
            if (!seen_.count(key)) throw ConfigError(Kind::UnknownKey, child_path(key), "unknown key");
        }
    }

    static double as_number(const Json& v, const std::string& path) {
        if (!v.is_number()) throw ConfigError(Kind::Schema, path, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(Kind::Invariant, path, "must be finite");
        return d;
    }

    static Vec3 as_vec3(const Json& v, const std::string& path) {
        if (!v.is_array() || v.size() != 3) throw ConfigError(Kind::Schema, path, "expected [x, y, z]");
        return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]"), as_number(v[2], path + "[2]")};
    }

private:
    const Json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string& path, const std::string& message) {
    if (!ok) throw ConfigError(Kind::Invariant, path, message);
}

DhConvention parse_convention(const std::string& name, const std::string& path) {
    if (name == "modified") return DhConvention::Modified;
    if (name == "standard") return DhConvention::Standard;
    throw ConfigError(Kind::Invariant, path, "convention must be \"modified\" or \"standard\"");
}

const char* convention_name(DhConvention c) {
    return c == DhConvention::Standard ? "standard" : "modified";
}

ManipulatorModel parse_manipulator(const Json& node) {
    Section s(node, "manipulator");
    const DhConvention convention =
        parse_convention(s.string("convention", "modified"), s.child_path("convention"));

    Pose base;
    if (s.has("base_pose")) {
        Section b(s.raw("base_pose"), "manipulator.base_pose");
        base.position = b.vec3("position", Vec3::Zero());
        if (b.has("orientation")) {
            const Json& rows = b.raw("orientation");
            const std::string p = "manipulator.base_pose.orientation";
            if (!rows.is_array() || rows.size() != 3) throw ConfigError(Kind::Schema, p, "expected 3 rows");
            for (int r = 0; r < 3; ++r) {
                base.orientation.row(r) = Section::as_vec3(rows[r], p + "[" + std::to_string(r) + "]").transpose();
            }
            const Mat3& m = base.orientation;
            require((m * m.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() <= 1e-9 &&
                        std::abs(m.determinant() - 1.0) <= 1e-9,
                    p, "must be a proper rotation matrix");
        }
        b.finish();
    }

    if (!s.has("links")) throw ConfigError(Kind::Schema, "manipulator.links", "required field is missing");
    const Json& links_node = s.raw("links");
    if (!links_node.is_array()) throw ConfigError(Kind::Schema, "manipulator.links", "expected an array");
    if (links_node.size() != kJointCount) {
        throw ConfigError(Kind::Invariant, "manipulator.links",
                          "exactly 6 links are required, got " + std::to_string(links_node.size()));
    }
    const ManipulatorModel defaults = master_manipulator();
    std::array<DhLink, kJointCount> links{};
    for (std::size_t j = 0; j < kJointCount; ++j) {
        const std::string p = "manipulator.links[" + std::to_string(j) + "]";
        Section l(links_node[j], p);
        DhLink& link = links[j];
        link.alpha = l.required_number("alpha");
        link.a = l.required_number("a");
        link.d = l.number("d", 0.0);
        link.theta_offset = l.number("theta_offset", 0.0);
        link.theta_down = l.number("theta_down", defaults.link(j).theta_down);
        link.theta_up = l.number("theta_up", defaults.link(j).theta_up);
        l.finish();
        const std::string name = "link " + std::to_string(j + 1);
        require(link.a >= 0.0, p + ".a", name + ": link length a must be >= 0");
        require(link.theta_down <= link.theta_up, p,
                name + ": theta_down (" + std::to_string(link.theta_down) +
                    ") must not exceed theta_up (" + std::to_string(link.theta_up) + ")");
    }
    s.finish();
    return ManipulatorModel(links, convention, base);
}

Json vec_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }
Json interval_json(const Interval& iv) { return Json::array({iv.lower, iv.upper}); }

Json to_json(const RunConfig& c) {
    Json links = Json::array();
    for (const DhLink& l : c.manipulator.links()) {
        links.push_back({{"alpha", l.alpha}, {"a", l.a}, {"d", l.d}, {"theta_offset", l.theta_offset},
                         {"theta_down", l.theta_down}, {"theta_up", l.theta_up}});
    }
    const Mat3& rot = c.manipulator.base_pose().orientation;
    Json orientation = Json::array();
    for (int r = 0; r < 3; ++r) orientation.push_back(vec_json(rot.row(r).transpose()));

    Json j;
    j["manipulator"] = {{"convention", convention_name(c.manipulator.convention())},
                        {"base_pose",
                         {{"position", vec_json(c.manipulator.base_pose().position)},
                          {"orientation", orientation}}},
                        {"links", links}};
    j["dexterity"] = {{"K", c.dexterity.K}, {"tau", c.tau}, {"isovalue", c.isovalue}};
    j["sampling"] = {{"n_samples", c.n_samples}, {"seed", c.seed}, {"r", c.r}, {"r_auto", c.r_auto}};
    j["ehem"] = {{"fulcrum", vec_json(c.ehem.fulcrum)},
                 {"desk_slide_range", interval_json(c.ehem.desk_slide_range)},
                 {"reach_range", interval_json(c.ehem.reach_range)},
                 {"pitch_range", interval_json(c.ehem.pitch_range)},
                 {"roll_range", interval_json(c.ehem.roll_range)},
                 {"forearm_length", c.ehem.forearm_length},
                 {"wrist_radius", c.ehem.wrist_radius},
                 {"mirror_plane_y", c.mirror_plane_y},
                 {"n_samples", c.ehem_samples}};
    j["layout"] = {{"R", vec_json(c.layout.R)},
                   {"D", c.layout.D},
                   {"alpha", c.layout.alpha},
                   {"binarize", c.binarize},
                   {"interaction_tau", c.interaction_tau}};
    j["optimize"] = {{"strategy", std::string(to_string(c.optimize.strategy))},
                     {"budget", c.optimize.budget},
                     {"grid_points", c.optimize.grid_points},
                     {"xtol", c.optimize.xtol},
                     {"initial_step", c.optimize.initial_step},
                     {"seed_repeats", c.seed_repeats},
                     {"bounds",
                      {{"a3", interval_json(c.optimize.bounds.a3)},
                       {"a4", interval_json(c.optimize.bounds.a4)},
                       {"D", interval_json(c.optimize.bounds.D)}}}};
    j["output"] = {{"directory", c.output.directory}, {"mesh_formats", c.output.mesh_formats}};
    return j;
}

}  // namespace

DesignPoint RunConfig::design() const {
    return {manipulator.link(2).a, manipulator.link(3).a, layout.D};
}

EvaluationConfig RunConfig::evaluation() const {
    EvaluationConfig e;
    e.manipulator = manipulator;
    e.dexterity = dexterity;
    e.tau = tau;
    e.n_samples = n_samples;
    e.seed = seed;
    e.resolution = r;
    e.resolution_auto = r_auto;
    e.ehem = ehem;
    e.mirror_plane_y = mirror_plane_y;
    e.ehem_samples = ehem_samples;
    e.layout = layout;
    e.binarize = binarize;
    e.interaction_tau = interaction_tau;
    e.seed_repeats = seed_repeats;
    return e;
}

RunConfig default_run_config() { return RunConfig{}; }

RunConfig parse_config(const std::string& text) {
    Json root;
    try {
        root = Json::parse(text, nullptr, true, true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(Kind::Parse, "", e.what());
    }
    RunConfig c = default_run_config();
    Section top(root, "");
    if (!top.has("manipulator")) throw ConfigError(Kind::Schema, "manipulator", "required section is missing");
    c.manipulator = parse_manipulator(top.raw("manipulator"));

    if (top.has("dexterity")) {
        Section s(top.raw("dexterity"), "dexterity");
        c.dexterity.K = s.number("K", c.dexterity.K);
        c.tau = s.number("tau", c.tau);
        c.isovalue = s.number("isovalue", c.isovalue);
        s.finish();
        require(c.dexterity.K > 0.0, "dexterity.K", "must be positive");
        require(c.tau >= 0.0 && c.tau <= 1.0, "dexterity.tau", "must lie in [0, 1]");
        require(c.isovalue > 0.0 && c.isovalue < 1.0, "dexterity.isovalue", "must lie in (0, 1)");
    }
    if (top.has("sampling")) {
        Section s(top.raw("sampling"), "sampling");
        c.n_samples = s.count("n_samples", c.n_samples);
        c.seed = s.count("seed", c.seed);
        c.r = s.number("r", c.r);
        c.r_auto = s.boolean("r_auto", c.r_auto);
        s.finish();
        require(c.n_samples >= 1, "sampling.n_samples", "must be at least 1");
        require(c.r > 0.0, "sampling.r", "must be positive");
    }
    if (top.has("ehem")) {
        Section s(top.raw("ehem"), "ehem");
        c.ehem.fulcrum = s.vec3("fulcrum", c.ehem.fulcrum);
        c.ehem.desk_slide_range = s.interval("desk_slide_range", c.ehem.desk_slide_range);
        c.ehem.reach_range = s.interval("reach_range", c.ehem.reach_range);
        c.ehem.pitch_range = s.interval("pitch_range", c.ehem.pitch_range);
        c.ehem.roll_range = s.interval("roll_range", c.ehem.roll_range);
        c.ehem.forearm_length = s.number("forearm_length", c.ehem.forearm_length);
        c.ehem.wrist_radius = s.number("wrist_radius", c.ehem.wrist_radius);
        c.mirror_plane_y = s.number("mirror_plane_y", c.mirror_plane_y);
        c.ehem_samples = s.count("n_samples", c.ehem_samples);
        s.finish();
        require(c.ehem.forearm_length > 0.0, "ehem.forearm_length", "must be positive");
        require(c.ehem.wrist_radius >= 0.0, "ehem.wrist_radius", "must be nonnegative");
        require(c.ehem_samples >= 1, "ehem.n_samples", "must be at least 1");
    }
    if (top.has("layout")) {
        Section s(top.raw("layout"), "layout");
        c.layout.R = s.vec3("R", c.layout.R);
        c.layout.D = s.number("D", c.layout.D);
        c.layout.alpha = s.number("alpha", c.layout.alpha);
        c.binarize = s.boolean("binarize", c.binarize);
        c.interaction_tau = s.number("interaction_tau", c.interaction_tau);
        s.finish();
        require(c.layout.D >= 0.0, "layout.D", "must be >= 0");
        require(c.layout.alpha > 0.0 && c.layout.alpha <= 1.0, "layout.alpha", "must lie in (0, 1]");
        require(c.interaction_tau >= 0.0 && c.interaction_tau <= 1.0, "layout.interaction_tau",
                "must lie in [0, 1]");
    }
    if (top.has("optimize")) {
        Section s(top.raw("optimize"), "optimize");
        const std::string strategy = s.string("strategy", std::string(to_string(c.optimize.strategy)));
        try {
            c.optimize.strategy = parse_strategy(strategy);
        } catch (const InvalidInput& e) {
            throw ConfigError(Kind::Invariant, "optimize.strategy", e.what());
        }
        c.optimize.budget = s.count("budget", c.optimize.budget);
        c.optimize.grid_points = s.count("grid_points", c.optimize.grid_points);
        c.optimize.xtol = s.number("xtol", c.optimize.xtol);
        c.optimize.initial_step = s.number("initial_step", c.optimize.initial_step);
        c.seed_repeats = s.count("seed_repeats", c.seed_repeats);
        if (s.has("bounds")) {
            Section b(s.raw("bounds"), "optimize.bounds");
            c.optimize.bounds.a3 = b.interval("a3", c.optimize.bounds.a3);
            c.optimize.bounds.a4 = b.interval("a4", c.optimize.bounds.a4);
            c.optimize.bounds.D = b.interval("D", c.optimize.bounds.D);
            b.finish();
        }
        s.finish();
        require(c.optimize.budget >= 1, "optimize.budget", "must be at least 1");
        require(c.optimize.grid_points >= 1, "optimize.grid_points", "must be at least 1");
        require(c.optimize.xtol > 0.0, "optimize.xtol", "must be positive");
        require(c.optimize.initial_step > 0.0 && c.optimize.initial_step <= 1.0,
                "optimize.initial_step", "must lie in (0, 1]");
        require(c.seed_repeats >= 1, "optimize.seed_repeats", "must be at least 1");
        for (const auto& [name, iv] : {std::pair{"a3", c.optimize.bounds.a3},
                                       std::pair{"a4", c.optimize.bounds.a4},
                                       std::pair{"D", c.optimize.bounds.D}}) {
            require(iv.lower >= 0.0, std::string("optimize.bounds.") + name, "must be nonnegative");
        }
    }
    if (top.has("output")) {
        Section s(top.raw("output"), "output");
        c.output.directory = s.string("directory", c.output.directory);
        if (s.has("mesh_formats")) {
            const Json& f = s.raw("mesh_formats");
            if (!f.is_array()) throw ConfigError(Kind::Schema, "output.mesh_formats", "expected an array");
            c.output.mesh_formats.clear();
            for (std::size_t n = 0; n < f.size(); ++n) {
                const std::string p = "output.mesh_formats[" + std::to_string(n) + "]";
                if (!f[n].is_string()) throw ConfigError(Kind::Schema, p, "expected a string");
                const std::string fmt = f[n].get<std::string>();
                require(fmt == "ply" || fmt == "obj", p, "mesh format must be \"ply\" or \"obj\"");
                c.output.mesh_formats.push_back(fmt);
            }
        }
        s.finish();
        require(!c.output.directory.empty(), "output.directory", "must not be empty");
    }
    top.finish();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(Kind::Parse, "", "cannot open config file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string dump_config(const RunConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

std::string config_hash(const RunConfig& cfg) {
    // Where artifacts go does not change what they contain.
    RunConfig content = cfg;
    content.output.directory.clear();
    const std::string canonical = to_json(content).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : canonical) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace ergoscope

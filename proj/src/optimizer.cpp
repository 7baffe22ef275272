#include "ergoscope/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace ergoscope {

namespace {

constexpr double kViolationPenalty = 1e-6;

using Vec = std::array<double, 3>;

DesignPoint to_point(const Vec& v) { return {v[0], v[1], v[2]}; }
Vec to_vec(const DesignPoint& p) { return {p.a3, p.a4, p.D}; }

std::array<Interval, 3> axes(const DesignBounds& b) { return {b.a3, b.a4, b.D}; }

// Objective wrapper that caches, counts, and records history.
class Evaluator {
public:
    Evaluator(const Objective& objective, std::size_t budget, OptimizationResult& result)
        : objective_(objective), budget_(budget), result_(result) {}

    bool exhausted() const { return result_.evaluations >= budget_; }

    // F at p, or nullopt when p is new and the budget is spent.
    std::optional<double> operator()(const DesignPoint& p) {
        const Vec key = to_vec(p);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        if (exhausted()) {
            result_.truncated = true;
            return std::nullopt;
        }
        const double f = objective_(p);
        ++result_.evaluations;
        cache_.emplace(key, f);
        result_.history.push_back({p, f});
        if (result_.history.size() == 1 || better(f, p, result_.best_F, result_.best)) {
            result_.best = p;
            result_.best_F = f;
        }
        return f;
    }

private:
    const Objective& objective_;
    std::size_t budget_;
    OptimizationResult& result_;
    std::map<Vec, double> cache_;
};

std::vector<double> lattice_axis(const Interval& iv, std::size_t count) {
    if (iv.width() == 0.0 || count <= 1) return {iv.width() == 0.0 ? iv.lower : 0.5 * (iv.lower + iv.upper)};
    std::vector<double> pts(count);
    for (std::size_t n = 0; n < count; ++n) {
        pts[n] = n + 1 == count ? iv.upper
                                : iv.lower + iv.width() * static_cast<double>(n) / double(count - 1);
    }
    return pts;
}

void run_grid(const DesignBounds& bounds, std::size_t per_axis, Evaluator& eval) {
    const auto ax = axes(bounds);
    const auto xs = lattice_axis(ax[0], per_axis);
    const auto ys = lattice_axis(ax[1], per_axis);
    const auto zs = lattice_axis(ax[2], per_axis);
    for (double x : xs)
        for (double y : ys)
            for (double z : zs)
                if (!eval({x, y, z})) return;
}

void run_nelder_mead(const OptimizationProblem& problem, const Vec& start, const Vec& step,
                     Evaluator& eval) {
    const auto ax = axes(problem.bounds);
    std::vector<int> free_axes;
    for (int a = 0; a < 3; ++a)
        if (ax[a].width() > 0.0) free_axes.push_back(a);
    const std::size_t n = free_axes.size();
    if (n == 0) {
        eval(to_point(start));
        return;
    }

    // Simplex coordinates live in the free subspace; fixed axes stay at start.
    auto embed = [&](const std::vector<double>& x) {
        Vec v = start;
        for (std::size_t i = 0; i < n; ++i) v[free_axes[i]] = x[i];
        return v;
    };
    // Minimized cost: -F at the clipped point plus the violation penalty.
    auto cost = [&](const std::vector<double>& x) -> std::optional<double> {
        Vec v = embed(x);
        double violation = 0.0;
        for (int a = 0; a < 3; ++a) {
            const double c = std::clamp(v[a], ax[a].lower, ax[a].upper);
            violation += std::abs(v[a] - c);
            v[a] = c;
        }
        const auto f = eval(to_point(v));
        if (!f) return std::nullopt;
        return -*f + kViolationPenalty * violation;
    };

    struct Vertex {
        std::vector<double> x;
        double cost;
    };
    std::vector<Vertex> simplex;
    std::vector<double> x0(n);
    for (std::size_t i = 0; i < n; ++i) x0[i] = start[free_axes[i]];
    auto c0 = cost(x0);
    if (!c0) return;
    simplex.push_back({x0, *c0});
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> xi = x0;
        const int a = free_axes[i];
        const double h = step[a];
        xi[i] = (xi[i] + h <= ax[a].upper) ? xi[i] + h : xi[i] - h;
        auto ci = cost(xi);
        if (!ci) return;
        simplex.push_back({xi, *ci});
    }

    auto blend = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + t * (b[i] - a[i]);
        return out;
    };

    while (true) {
        std::stable_sort(simplex.begin(), simplex.end(),
                         [](const Vertex& l, const Vertex& r) { return l.cost < r.cost; });
        double size = 0.0;
        for (std::size_t v = 1; v <= n; ++v)
            for (std::size_t i = 0; i < n; ++i)
                size = std::max(size, std::abs(simplex[v].x[i] - simplex[0].x[i]));
        if (size < problem.xtol) return;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i] / double(n);
        Vertex& worst = simplex[n];

        const auto xr = blend(centroid, worst.x, -1.0);
        const auto cr = cost(xr);
        if (!cr) return;
        if (*cr < simplex[0].cost) {
            const auto xe = blend(centroid, worst.x, -2.0);
            const auto ce = cost(xe);
            if (!ce) return;
            worst = *ce < *cr ? Vertex{xe, *ce} : Vertex{xr, *cr};
            continue;
        }
        if (*cr < simplex[n - 1].cost) {
            worst = {xr, *cr};
            continue;
        }
        // Contraction toward the better of the reflected and worst points.
        const bool outside = *cr < worst.cost;
        const auto xc = outside ? blend(centroid, xr, 0.5) : blend(centroid, worst.x, 0.5);
        const auto cc = cost(xc);
        if (!cc) return;
        if (*cc < std::min(*cr, worst.cost)) {
            worst = {xc, *cc};
            continue;
        }
        for (std::size_t v = 1; v <= n; ++v) {
            simplex[v].x = blend(simplex[0].x, simplex[v].x, 0.5);
            const auto cs = cost(simplex[v].x);
            if (!cs) return;
            simplex[v].cost = *cs;
        }
    }
}

}  // namespace

Strategy parse_strategy(std::string_view name) {
    if (name == "grid") return Strategy::Grid;
    if (name == "nelder_mead") return Strategy::NelderMead;
    if (name == "grid_then_nelder_mead") return Strategy::GridThenNelderMead;
    throw InvalidInput("unknown optimization strategy '" + std::string(name) + "'");
}

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::Grid: return "grid";
        case Strategy::NelderMead: return "nelder_mead";
        case Strategy::GridThenNelderMead: return "grid_then_nelder_mead";
    }
    return "grid_then_nelder_mead";
}

void OptimizationProblem::validate() const {
    for (const Interval& iv : axes(bounds)) {
        if (!std::isfinite(iv.lower) || !std::isfinite(iv.upper) || iv.lower > iv.upper ||
            iv.lower < 0.0) {
            throw InvalidInput("design bounds must be nonempty, finite and nonnegative");
        }
    }
    if (budget < 1) throw InvalidInput("optimization budget must be at least 1");
    if (grid_points < 1) throw InvalidInput("grid_points must be at least 1");
    if (!(xtol > 0.0)) throw InvalidInput("xtol must be positive");
    if (!(initial_step > 0.0 && initial_step <= 1.0)) {
        throw InvalidInput("initial_step must lie in (0, 1]");
    }
}

bool better(double f_a, const DesignPoint& a, double f_b, const DesignPoint& b) {
    if (f_a != f_b) return f_a > f_b;
    const double len_a = a.a3 + a.a4, len_b = b.a3 + b.a4;
    if (len_a != len_b) return len_a < len_b;
    return a.D < b.D;
}

OptimizationResult optimize(const OptimizationProblem& problem, const Objective& objective) {
    problem.validate();
    OptimizationResult result;
    Evaluator eval(objective, problem.budget, result);
    const auto ax = axes(problem.bounds);

    std::size_t per_axis = problem.grid_points;
    if (problem.strategy == Strategy::GridThenNelderMead) {
        const auto cap = static_cast<std::size_t>(std::cbrt(double(problem.budget) / 2.0) + 1e-9);
        per_axis = std::max<std::size_t>(1, std::min(per_axis, cap));
    }

    Vec start{};
    Vec step{};
    if (problem.strategy == Strategy::NelderMead) {
        for (int a = 0; a < 3; ++a) {
            start[a] = 0.5 * (ax[a].lower + ax[a].upper);
            step[a] = problem.initial_step * ax[a].width();
        }
    } else {
        run_grid(problem.bounds, per_axis, eval);
        start = to_vec(result.best);
        for (int a = 0; a < 3; ++a) {
            // Half a lattice spacing keeps the first simplex inside the best cell.
            step[a] = per_axis > 1 ? 0.5 * ax[a].width() / double(per_axis - 1)
                                   : problem.initial_step * ax[a].width();
        }
    }
    if (problem.strategy != Strategy::Grid && !result.truncated) {
        run_nelder_mead(problem, start, step, eval);
    }
    return result;
}

}  // namespace ergoscope

#include "rydgan/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rydgan/error.hpp"

namespace rydgan {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

struct Vertex {
    std::vector<double> x;
    double f;
};

}  // namespace

Bounds Bounds::unbounded(std::size_t dim) {
    const double inf = std::numeric_limits<double>::infinity();
    return Bounds{std::vector<double>(dim, -inf), std::vector<double>(dim, inf)};
}

NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> x0, const Bounds& bounds,
                             const NelderMeadOptions& options) {
    const std::size_t n = x0.size();
    if (n == 0) throw Error(ErrorKind::argument, "Nelder-Mead needs at least one parameter");
    if (bounds.lower.size() != n || bounds.upper.size() != n) throw Error(ErrorKind::shape, "bounds dimension mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(bounds.lower[i] <= bounds.upper[i])) throw Error(ErrorKind::argument, "empty bounds box");
    }

    auto clamp = [&](std::vector<double>& x) {
        for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(x[i], bounds.lower[i], bounds.upper[i]);
    };
    NelderMeadResult result;
    auto eval = [&](const std::vector<double>& x) {
        ++result.evaluations;
        const double f = objective(x);
        return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
    };

    clamp(x0);
    std::vector<Vertex> simplex;
    simplex.reserve(n + 1);
    simplex.push_back({x0, eval(x0)});
    if (!std::isfinite(simplex[0].f)) throw Error(ErrorKind::numeric, "objective is not finite at the initial point");

    for (std::size_t i = 0; i < n; ++i) {
        const double width = bounds.upper[i] - bounds.lower[i];
        double step = std::isfinite(width) ? options.initial_step * width
                                           : options.initial_step * std::max(1.0, std::abs(x0[i]));
        if (step == 0.0) step = 1e-3;
        auto x = x0;
        x[i] += step;
        if (x[i] > bounds.upper[i]) x[i] = x0[i] - step;
        clamp(x);
        simplex.push_back({x, eval(x)});
    }

    auto by_f = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
    std::vector<double> centroid(n), trial(n);
    auto point = [&](double coeff, const std::vector<double>& from) {
        // centroid + coeff * (centroid - from)
        for (std::size_t i = 0; i < n; ++i) trial[i] = centroid[i] + coeff * (centroid[i] - from[i]);
        clamp(trial);
        return trial;
    };

    for (result.iterations = 0; result.iterations < options.max_iters; ++result.iterations) {
        std::stable_sort(simplex.begin(), simplex.end(), by_f);
        if (simplex.back().f - simplex.front().f < options.tol) {
            result.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t v = 0; v < n; ++v) {
            for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i] / static_cast<double>(n);
        }
        Vertex& worst = simplex.back();

        const auto xr = point(kReflect, worst.x);
        const double fr = eval(xr);
        if (fr < simplex.front().f) {
            const auto xe = point(kExpand, worst.x);
            const double fe = eval(xe);
            worst = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
            continue;
        }
        if (fr < simplex[n - 1].f) {
            worst = {xr, fr};
            continue;
        }
        // Outside contraction when the reflection beat the worst vertex, inside otherwise.
        const bool outside = fr < worst.f;
        const auto xc = outside ? point(kContract, worst.x) : point(-kContract, worst.x);
        const double fc = eval(xc);
        if (fc < std::min(fr, worst.f)) {
            worst = {xc, fc};
            continue;
        }
        const auto& best = simplex.front().x;
        for (std::size_t v = 1; v <= n; ++v) {
            for (std::size_t i = 0; i < n; ++i) simplex[v].x[i] = best[i] + kShrink * (simplex[v].x[i] - best[i]);
            clamp(simplex[v].x);
            simplex[v].f = eval(simplex[v].x);
        }
    }

    std::stable_sort(simplex.begin(), simplex.end(), by_f);
    if (!result.converged && simplex.back().f - simplex.front().f < options.tol) result.converged = true;
    result.x = simplex.front().x;
    result.f = simplex.front().f;
    return result;
}

}  // namespace rydgan

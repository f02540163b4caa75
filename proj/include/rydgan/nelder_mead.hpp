#pragma once

#include <functional>
#include <span>
#include <vector>

namespace rydgan {

struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    /// Unbounded box of the given dimension.
    static Bounds unbounded(std::size_t dim);
};

struct NelderMeadOptions {
    int max_iters = 200;
    double tol = 1e-10;          // stop once max f - min f over the simplex drops below this
    double initial_step = 0.1;   // fraction of the box width, or absolute when unbounded
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Reflect/expand/contract/shrink simplex search with coefficients
/// 1, 2, 0.5, 0.5. Every trial point is clamped into `bounds` before it is
/// evaluated, so the returned vertex always lies inside the box.
NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> x0, const Bounds& bounds,
                             const NelderMeadOptions& options = {});

}  // namespace rydgan

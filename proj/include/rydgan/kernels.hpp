#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rydgan/generator.hpp"

namespace rydgan {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

namespace kernels {

// Each parallel kernel produces bitwise the same result as its serial
// counterpart: work is split over independent outputs, never over a
// floating-point reduction.

namespace serial {

/// One feature row per seed; stochastic modes are re-seeded per row.
RowMatrix generate_batch(const GeneratorParams& params, std::span<const double> seeds, const GenerationMode& mode,
                         const HardwareLimits& limits = {});

/// Sample covariance (divisor N - 1) of the rows of `data` about `mean`.
Eigen::MatrixXd covariance(const RowMatrix& data, const Eigen::VectorXd& mean);

/// Sum of squared deviations of each row from the column mean.
std::vector<double> variation_scores(const RowMatrix& images);

}  // namespace serial

namespace parallel {

RowMatrix generate_batch(const GeneratorParams& params, std::span<const double> seeds, const GenerationMode& mode,
                         const HardwareLimits& limits = {});

Eigen::MatrixXd covariance(const RowMatrix& data, const Eigen::VectorXd& mean);

std::vector<double> variation_scores(const RowMatrix& images);

}  // namespace parallel

/// Thread count used by the parallel kernels (1 when built without OpenMP).
int max_threads();
void set_threads(int n);

}  // namespace kernels
}  // namespace rydgan

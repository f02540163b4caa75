#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rydgan/kernels.hpp"

namespace rydgan {

struct GaussianSummary {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;
};

/// Sample mean and covariance (divisor N - 1) of the rows of `batch`.
GaussianSummary summarize(const RowMatrix& batch);

/// Frechet distance between two Gaussian summaries:
///   |mu1 - mu2|^2 + tr(C1 + C2 - 2 sqrt(sqrt(C1) C2 sqrt(C1))).
/// `jitter` is added to both covariance diagonals first; negative
/// eigenvalues are clamped to zero before any square root.
double fid(const GaussianSummary& a, const GaussianSummary& b, double jitter = 0.0);

/// FID against a fixed reference with sqrt(C_ref) computed once.
class FidReference {
  public:
    FidReference(GaussianSummary reference, double jitter);

    double distance_to(const GaussianSummary& other) const;
    const GaussianSummary& summary() const noexcept { return reference_; }

  private:
    GaussianSummary reference_;
    Eigen::MatrixXd sqrt_cov_;
    double trace_;
    double jitter_;
};

/// Jitter used for image-space FID on 784-D flattened images.
inline constexpr double kImageFidJitter = 1e-6;

/// V(G) = sum_ij (mu_ij - G_ij)^2 per image, mu the batch mean image.
std::vector<double> variation_scores(const RowMatrix& images);

struct CdfPoint {
    double value = 0.0;
    double fraction = 0.0;
};

/// Right-continuous empirical CDF at each distinct score.
std::vector<CdfPoint> variation_cdf(std::span<const double> scores);

}  // namespace rydgan

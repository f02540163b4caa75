#include "rydgan/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "rydgan/error.hpp"

namespace rydgan {

namespace {

Eigen::MatrixXd jittered(const Eigen::MatrixXd& c, double jitter) {
    Eigen::MatrixXd out = 0.5 * (c + c.transpose());
    out.diagonal().array() += jitter;
    return out;
}

// PSD square root with negative eigenvalues clamped.
Eigen::MatrixXd sqrt_psd(const Eigen::MatrixXd& c) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::numeric, "covariance eigendecomposition failed");
    const Eigen::VectorXd r = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * r.asDiagonal() * es.eigenvectors().transpose();
}

// tr sqrt(M) for symmetric PSD M.
double trace_sqrt(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::numeric, "eigendecomposition failed");
    return es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

void check_pair(const GaussianSummary& a, const GaussianSummary& b) {
    if (a.mean.size() != b.mean.size() || a.covariance.rows() != a.mean.size() ||
        b.covariance.rows() != b.mean.size() || a.covariance.cols() != a.covariance.rows() ||
        b.covariance.cols() != b.covariance.rows()) {
        throw Error(ErrorKind::shape, "FID inputs have mismatched dimensions");
    }
}

}  // namespace

GaussianSummary summarize(const RowMatrix& batch) {
    if (batch.rows() < 2) throw Error(ErrorKind::argument, "summarize needs at least two samples");
    GaussianSummary s;
    s.mean = batch.colwise().mean().transpose();
    s.covariance = kernels::parallel::covariance(batch, s.mean);
    return s;
}

double fid(const GaussianSummary& a, const GaussianSummary& b, double jitter) {
    check_pair(a, b);
    const Eigen::MatrixXd c1 = jittered(a.covariance, jitter);
    const Eigen::MatrixXd c2 = jittered(b.covariance, jitter);
    const Eigen::MatrixXd s1 = sqrt_psd(c1);
    const double cross = trace_sqrt(s1 * c2 * s1);
    const double value = (a.mean - b.mean).squaredNorm() + c1.trace() + c2.trace() - 2.0 * cross;
    return std::max(value, 0.0);
}

FidReference::FidReference(GaussianSummary reference, double jitter)
    : reference_(std::move(reference)), jitter_(jitter) {
    check_pair(reference_, reference_);
    const Eigen::MatrixXd c = jittered(reference_.covariance, jitter_);
    sqrt_cov_ = sqrt_psd(c);
    trace_ = c.trace();
}

double FidReference::distance_to(const GaussianSummary& other) const {
    check_pair(reference_, other);
    const Eigen::MatrixXd c2 = jittered(other.covariance, jitter_);
    const double cross = trace_sqrt(sqrt_cov_ * c2 * sqrt_cov_);
    const double value = (reference_.mean - other.mean).squaredNorm() + trace_ + c2.trace() - 2.0 * cross;
    return std::max(value, 0.0);
}

std::vector<double> variation_scores(const RowMatrix& images) { return kernels::parallel::variation_scores(images); }

std::vector<CdfPoint> variation_cdf(std::span<const double> scores) {
    if (scores.empty()) throw Error(ErrorKind::argument, "CDF of an empty score list");
    std::vector<double> sorted(scores.begin(), scores.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<CdfPoint> cdf;
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
        cdf.push_back({sorted[i], static_cast<double>(i + 1) / n});
    }
    return cdf;
}

}  // namespace rydgan

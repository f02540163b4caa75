#pragma once

#include <filesystem>
#include <string>

#include <Eigen/Dense>

#include "rydgan/data.hpp"

namespace rydgan {

inline constexpr double kScaleFloor = 1e-6;

/// Top-k principal components plus the per-feature affine map into the
/// generator's output window [kScaleFloor, 1/k].
struct PcaModel {
    Eigen::VectorXd mean;
    RowMatrix components;      // k x d, orthonormal rows, descending variance
    Eigen::VectorXd eigenvalues;
    Eigen::VectorXd scale_lo;  // per-feature bounds on the training weights
    Eigen::VectorXd scale_hi;

    int k() const noexcept { return static_cast<int>(components.rows()); }
    int dim() const noexcept { return static_cast<int>(components.cols()); }
    double window() const noexcept { return 1.0 / components.rows(); }
};

/// Eigendecomposition of the sample covariance. Each component's sign is
/// fixed so that its largest-magnitude entry is positive.
PcaModel fit_pca(const ImageSet& train, int k);

Eigen::VectorXd transform(const PcaModel& model, const Eigen::Ref<const Eigen::VectorXd>& image);
Eigen::VectorXd inverse_transform(const PcaModel& model, const Eigen::Ref<const Eigen::VectorXd>& weights);

/// Row-wise batch forms.
RowMatrix transform_batch(const PcaModel& model, const RowMatrix& images);
RowMatrix inverse_transform_batch(const PcaModel& model, const RowMatrix& weights);

/// Affine map [scale_lo, scale_hi] -> [kScaleFloor, 1/k], no clipping.
Eigen::VectorXd scale_features(const PcaModel& model, const Eigen::Ref<const Eigen::VectorXd>& weights);
Eigen::VectorXd unscale_features(const PcaModel& model, const Eigen::Ref<const Eigen::VectorXd>& scaled);
RowMatrix scale_batch(const PcaModel& model, const RowMatrix& weights);
RowMatrix unscale_batch(const PcaModel& model, const RowMatrix& scaled);

/// Generator features -> images: unscale, then inverse PCA.
RowMatrix features_to_images(const PcaModel& model, const RowMatrix& features);

std::string serialize_pca(const PcaModel& model);
PcaModel parse_pca(const std::string& text, const std::string& source = "<pca>");
void save_pca(const PcaModel& model, const std::filesystem::path& path);
PcaModel load_pca(const std::filesystem::path& path);

}  // namespace rydgan

#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "rydgan/kernels.hpp"

namespace rydgan {

inline constexpr int kImageSide = 28;
inline constexpr int kImagePixels = kImageSide * kImageSide;

/// Images as rows of 784 pixels in [0, 1], row-major within each image.
struct ImageSet {
    RowMatrix pixels;
    std::vector<int> labels;

    std::size_t size() const noexcept { return labels.size(); }
    ImageSet filter_class(int label) const;
    ImageSet head(std::size_t count) const;
};

/// Parses a big-endian IDX image/label pair (magic 2051 / 2049, 28x28).
/// Format errors name the byte offset where parsing failed.
ImageSet load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path);

/// Shuffled split with `validation_fraction` of the rows held out.
std::pair<ImageSet, ImageSet> split_train_validation(const ImageSet& set, double validation_fraction,
                                                     std::uint64_t shuffle_seed);

}  // namespace rydgan

#include "rydgan/data.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "rydgan/error.hpp"
#include "rydgan/io.hpp"

namespace rydgan {

namespace {

constexpr std::uint32_t kImageMagic = 2051;
constexpr std::uint32_t kLabelMagic = 2049;

class ByteReader {
  public:
    ByteReader(std::string bytes, std::string name) : bytes_(std::move(bytes)), name_(std::move(name)) {}

    std::uint32_t u32() {
        require(4, "header field");
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | static_cast<unsigned char>(bytes_[pos_ + i]);
        pos_ += 4;
        return v;
    }

    const unsigned char* take(std::size_t n, const char* what) {
        require(n, what);
        const auto* p = reinterpret_cast<const unsigned char*>(bytes_.data() + pos_);
        pos_ += n;
        return p;
    }

    [[noreturn]] void fail(const std::string& what, std::size_t offset) const {
        throw Error(ErrorKind::data, name_ + ": " + what + " at byte offset " + std::to_string(offset));
    }

    std::size_t offset() const { return pos_; }

  private:
    void require(std::size_t n, const char* what) const {
        if (bytes_.size() - pos_ < n) {
            fail(std::string("truncated file while reading ") + what + " (have " +
                     std::to_string(bytes_.size() - pos_) + " of " + std::to_string(n) + " bytes)",
                 pos_);
        }
    }

    std::string bytes_;
    std::string name_;
    std::size_t pos_ = 0;
};

void expect_magic(ByteReader& r, std::uint32_t expected) {
    const std::uint32_t magic = r.u32();
    if (magic != expected) {
        r.fail("bad magic number " + std::to_string(magic) + " (expected " + std::to_string(expected) + ")", 0);
    }
}

}  // namespace

ImageSet ImageSet::filter_class(int label) const {
    std::vector<Eigen::Index> rows;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) rows.push_back(static_cast<Eigen::Index>(i));
    }
    ImageSet out;
    out.pixels = pixels(rows, Eigen::all);
    out.labels.assign(rows.size(), label);
    return out;
}

ImageSet ImageSet::head(std::size_t count) const {
    count = std::min(count, size());
    ImageSet out;
    out.pixels = pixels.topRows(static_cast<Eigen::Index>(count));
    out.labels.assign(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(count));
    return out;
}

ImageSet load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path) {
    ByteReader img(read_file(images_path), images_path.string());
    expect_magic(img, kImageMagic);
    const std::uint32_t count = img.u32();
    const std::size_t dims_at = img.offset();
    const std::uint32_t rows = img.u32();
    const std::uint32_t cols = img.u32();
    if (rows != kImageSide || cols != kImageSide) {
        img.fail("image dimensions " + std::to_string(rows) + "x" + std::to_string(cols) + " (expected 28x28)",
                 dims_at);
    }
    const auto* raw = img.take(std::size_t{count} * kImagePixels, "image payload");

    ByteReader lab(read_file(labels_path), labels_path.string());
    expect_magic(lab, kLabelMagic);
    const std::size_t count_at = lab.offset();
    const std::uint32_t label_count = lab.u32();
    if (label_count != count) {
        lab.fail("label count " + std::to_string(label_count) + " differs from image count " +
                     std::to_string(count),
                 count_at);
    }
    const auto* labels = lab.take(count, "label payload");

    ImageSet set;
    set.pixels.resize(count, kImagePixels);
    set.labels.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (labels[i] > 9) lab.fail("label " + std::to_string(labels[i]) + " outside 0-9", 8 + i);
        set.labels[i] = labels[i];
        for (int p = 0; p < kImagePixels; ++p) {
            set.pixels(static_cast<Eigen::Index>(i), p) = raw[i * kImagePixels + p] / 255.0;
        }
    }
    return set;
}

std::pair<ImageSet, ImageSet> split_train_validation(const ImageSet& set, double validation_fraction,
                                                     std::uint64_t shuffle_seed) {
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
        throw Error(ErrorKind::config, "validation fraction must lie in (0, 1)");
    }
    std::vector<Eigen::Index> order(set.size());
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::mt19937_64 rng(shuffle_seed);
    std::shuffle(order.begin(), order.end(), rng);

    const auto n_val = static_cast<std::size_t>(std::llround(validation_fraction * set.size()));
    std::vector<Eigen::Index> val(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
    std::vector<Eigen::Index> train(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());

    auto take = [&](const std::vector<Eigen::Index>& idx) {
        ImageSet out;
        out.pixels = set.pixels(idx, Eigen::all);
        for (auto i : idx) out.labels.push_back(set.labels[static_cast<std::size_t>(i)]);
        return out;
    };
    return {take(train), take(val)};
}

}  // namespace rydgan

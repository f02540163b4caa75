#include "rydgan/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rydgan/error.hpp"
#include "rydgan/io.hpp"

namespace rydgan {

std::string encode_pgm(std::span<const double> pixels, int width, int height) {
    if (width < 1 || height < 1 || pixels.size() != static_cast<std::size_t>(width) * height) {
        throw Error(ErrorKind::shape, "pixel count does not match image size");
    }
    std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    out.reserve(out.size() + pixels.size());
    for (double v : pixels) {
        if (!std::isfinite(v)) throw Error(ErrorKind::numeric, "non-finite pixel value");
        out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0))));
    }
    return out;
}

void write_pgm(const std::filesystem::path& path, std::span<const double> pixels, int width, int height) {
    write_file_atomic(path, encode_pgm(pixels, width, height));
}

void write_montage(const std::filesystem::path& path, const RowMatrix& images, int columns, int side) {
    if (images.rows() < 1 || columns < 1) throw Error(ErrorKind::argument, "montage needs images and columns");
    if (images.cols() != static_cast<Eigen::Index>(side) * side) throw Error(ErrorKind::shape, "image size mismatch");
    const int count = static_cast<int>(images.rows());
    const int cols = std::min(columns, count);
    const int rows = (count + cols - 1) / cols;
    const int width = cols * (side + 1) + 1;
    const int height = rows * (side + 1) + 1;
    std::vector<double> canvas(static_cast<std::size_t>(width) * height, 0.0);
    for (int i = 0; i < count; ++i) {
        const int ox = 1 + (i % cols) * (side + 1);
        const int oy = 1 + (i / cols) * (side + 1);
        for (int y = 0; y < side; ++y) {
            for (int x = 0; x < side; ++x) {
                canvas[static_cast<std::size_t>(oy + y) * width + ox + x] = images(i, y * side + x);
            }
        }
    }
    write_pgm(path, canvas, width, height);
}

}  // namespace rydgan

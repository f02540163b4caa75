#include <gtest/gtest.h>

#include "rydgan/error.hpp"
#include "rydgan/image_io.hpp"
#include "rydgan/io.hpp"
#include "test_support.hpp"

using namespace rydgan;

namespace {

const std::string kHeader = "P5\n28 28\n255\n";

}  // namespace

TEST(Pgm, AllZero) {
    const std::vector<double> px(784, 0.0);
    const auto s = encode_pgm(px, 28, 28);
    ASSERT_EQ(s.size(), kHeader.size() + 784);
    EXPECT_EQ(s.substr(0, kHeader.size()), kHeader);
    for (std::size_t i = kHeader.size(); i < s.size(); ++i) ASSERT_EQ(s[i], '\0');
}

TEST(Pgm, AllOneAndClamp) {
    for (double v : {1.0, 2.0}) {
        const std::vector<double> px(784, v);
        const auto s = encode_pgm(px, 28, 28);
        for (std::size_t i = kHeader.size(); i < s.size(); ++i) ASSERT_EQ(static_cast<unsigned char>(s[i]), 255);
    }
    const std::vector<double> neg(784, -0.5);
    const auto s = encode_pgm(neg, 28, 28);
    EXPECT_EQ(static_cast<unsigned char>(s.back()), 0);
}

TEST(Pgm, Rounding) {
    std::vector<double> px(784, 0.5);
    const auto s = encode_pgm(px, 28, 28);
    EXPECT_EQ(static_cast<unsigned char>(s.back()), 128);
}

TEST(Pgm, WriteAndUnwritable) {
    test::TempDir dir("pgm");
    const std::vector<double> px(784, 0.25);
    write_pgm(dir / "a.pgm", px);
    EXPECT_EQ(read_file(dir / "a.pgm"), encode_pgm(px, 28, 28));
    // A regular file where a directory is needed.
    try {
        write_pgm(dir / "a.pgm/b.pgm", px);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::io);
    }
}

TEST(Montage, Layout) {
    test::TempDir dir("montage");
    RowMatrix images = RowMatrix::Zero(5, 784);
    images.row(4).setOnes();
    write_montage(dir / "m.pgm", images, 3);
    const auto s = read_file(dir / "m.pgm");
    // 3 columns, 2 rows, 1-pixel gutters around every tile.
    const int w = 3 * 29 + 1, h = 2 * 29 + 1;
    const std::string header = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    ASSERT_EQ(s.substr(0, header.size()), header);
    ASSERT_EQ(s.size(), header.size() + static_cast<std::size_t>(w * h));
    auto at = [&](int x, int y) { return static_cast<unsigned char>(s[header.size() + y * w + x]); };
    EXPECT_EQ(at(30 + 5, 30 + 5), 255);  // image 4 is row 1, column 1
    EXPECT_EQ(at(29, 30 + 5), 0);        // gutter
    EXPECT_EQ(at(0, 0), 0);
    EXPECT_EQ(at(6, 6), 0);
}

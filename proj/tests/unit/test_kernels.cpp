#include <random>

#include <gtest/gtest.h>

#include "rydgan/kernels.hpp"
#include "rydgan/training.hpp"

using namespace rydgan;

namespace {

GeneratorParams params() {
    TrainConfig c;
    c.steps_per_us = 200;
    auto p = initial_params(c, PulseShape::trapezoid, PulseShape::gaussian);
    return p;
}

}  // namespace

TEST(Kernels, GenerateBatchParallelMatchesSerial) {
    const auto p = params();
    const auto seeds = draw_seeds(12, 4);
    EXPECT_EQ(kernels::parallel::generate_batch(p, seeds, ExactMode{}),
              kernels::serial::generate_batch(p, seeds, ExactMode{}));
    const GenerationMode noisy = NoisyMode{ErrorModel{.rng_seed = 3}, ShotsMode{500, 8}};
    EXPECT_EQ(kernels::parallel::generate_batch(p, seeds, noisy), kernels::serial::generate_batch(p, seeds, noisy));
}

TEST(Kernels, StochasticRowsDiffer) {
    const auto p = params();
    const std::vector<double> seeds(3, 0.5);
    const auto m = kernels::serial::generate_batch(p, seeds, ShotsMode{200, 1});
    EXPECT_NE(m.row(0), m.row(1));
    const auto exact = kernels::serial::generate_batch(p, seeds, ExactMode{});
    EXPECT_EQ(exact.row(0), exact.row(2));
}

TEST(Kernels, CovarianceParallelMatchesSerialAndEigen) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RowMatrix data(50, 40);
    for (auto& v : data.reshaped()) v = u(rng);
    const Eigen::VectorXd mean = data.colwise().mean().transpose();
    const auto a = kernels::serial::covariance(data, mean);
    const auto b = kernels::parallel::covariance(data, mean);
    EXPECT_EQ(a, b);
    const Eigen::MatrixXd centered = data.rowwise() - mean.transpose();
    const Eigen::MatrixXd direct = centered.transpose() * centered / 49.0;
    EXPECT_LT((a - direct).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Kernels, VariationParallelMatchesSerial) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RowMatrix images(37, 784);
    for (auto& v : images.reshaped()) v = u(rng);
    EXPECT_EQ(kernels::parallel::variation_scores(images), kernels::serial::variation_scores(images));
}

TEST(Kernels, ThreadCountIndependence) {
    const auto p = params();
    const auto seeds = draw_seeds(8, 9);
    const int before = kernels::max_threads();
    kernels::set_threads(1);
    const auto one = kernels::parallel::generate_batch(p, seeds, ExactMode{});
    kernels::set_threads(4);
    const auto four = kernels::parallel::generate_batch(p, seeds, ExactMode{});
    kernels::set_threads(before);
    EXPECT_EQ(one, four);
}

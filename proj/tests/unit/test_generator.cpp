#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "rydgan/error.hpp"
#include "rydgan/generator.hpp"

using namespace rydgan;

namespace {

GeneratorParams sample_params() {
    GeneratorParams p;
    p.arrangement.positions = {{30, 30}, {36.5, 30}, {30, 36.2}, {36.4, 36.6}};
    p.arrangement.couplings = {0.2, 0.9, 0.5, 0.7};
    p.rabi_shape = PulseShape::gaussian;
    p.rabi_param = 9.0;
    p.local_shape = PulseShape::triangle;
    p.local_param = -14.0;
    p.global_detuning_offset = 3.0;
    return p;
}

std::vector<double> random_distribution(std::mt19937_64& rng, std::size_t n) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> p(n);
    for (auto& v : p) v = e(rng);
    const double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& v : p) v /= s;
    return p;
}

struct Moments {
    double mean = 0.0;
    double stddev = 0.0;
};

Moments moments(const std::vector<double>& x) {
    Moments m;
    for (double v : x) m.mean += v;
    m.mean /= static_cast<double>(x.size());
    for (double v : x) m.stddev += (v - m.mean) * (v - m.mean);
    m.stddev = std::sqrt(m.stddev / static_cast<double>(x.size() - 1));
    return m;
}

}  // namespace

TEST(ModuloEncode, Examples) {
    std::vector<double> p(16, 0.0);
    p[0] = 0.1;
    p[1] = 0.0625;
    p[2] = 1.0 - 0.1 - 0.0625;
    const auto f = modulo_encode(p);
    EXPECT_NEAR(f[0], 0.0375, 1e-15);
    EXPECT_EQ(f[1], 0.0625);
    EXPECT_EQ(f[3], 0.0);

    std::vector<double> one(16, 0.0);
    one[5] = 1.0;
    const auto g = modulo_encode(one);
    EXPECT_EQ(g[5], 0.0625);
    EXPECT_EQ(g[0], 0.0);
}

TEST(ModuloEncode, RangeAndIdentity) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto p = random_distribution(rng, 16);
        const auto f = modulo_encode(p);
        for (std::size_t i = 0; i < 16; ++i) {
            ASSERT_GT(f[i], 0.0);
            ASSERT_LE(f[i], 1.0 / 16);
            if (p[i] < 1.0 / 16) {
                ASSERT_EQ(f[i], p[i]);
            }
        }
    }
}

TEST(ModuloEncode, Errors) {
    EXPECT_THROW(modulo_encode(std::vector<double>{0.5, 0.6, -0.1, 0.0}), Error);
    EXPECT_THROW(modulo_encode(std::vector<double>{0.5, 0.4, 0.0, 0.0}), Error);
    EXPECT_THROW(modulo_encode(std::vector<double>{0.5, 0.25, 0.25}), Error);
}

TEST(Generator, ZeroAmplitudeGivesGroundState) {
    auto p = sample_params();
    p.rabi_param = 0.0;
    p.local_param = 0.0;
    p.global_detuning_offset = 0.0;
    const auto f = generate_features(p, 0.5, ExactMode{});
    EXPECT_NEAR(f[0], 1.0 / 16, 1e-15);
    for (std::size_t i = 1; i < 16; ++i) EXPECT_EQ(f[i], 0.0);
}

TEST(Generator, ExactModeDeterministic) {
    const auto p = sample_params();
    EXPECT_EQ(generate_features(p, 0.37, ExactMode{}), generate_features(p, 0.37, ExactMode{}));
}

TEST(Generator, SeedChangesOutput) {
    const auto p = sample_params();
    EXPECT_NE(generate_features(p, 0.2, ExactMode{}), generate_features(p, 0.9, ExactMode{}));
}

TEST(Generator, SeedSharedAcrossPulses) {
    const auto spec = make_hamiltonian_spec(sample_params(), 0.4);
    EXPECT_DOUBLE_EQ(spec.rabi.seed_noise / kRabiMax, 0.4);
    EXPECT_DOUBLE_EQ(spec.local_detuning.seed_noise / -kDetuningMax, 0.4);
    EXPECT_EQ(spec.local_detuning.kind, PulseKind::local_detuning);
}

TEST(Generator, RejectsBadInputs) {
    auto p = sample_params();
    EXPECT_THROW(generate_features(p, 0.05, ExactMode{}), Error);
    EXPECT_THROW(generate_features(p, 1.5, ExactMode{}), Error);
    p.rabi_param = 20.0;
    EXPECT_THROW(generate_features(p, 0.5, ExactMode{}), Error);
    p = sample_params();
    p.arrangement.positions[1] = {31, 30};
    EXPECT_THROW(generate_features(p, 0.5, ExactMode{}), Error);
    p = sample_params();
    p.local_param = 4.0;
    EXPECT_THROW(generate_features(p, 0.5, ExactMode{}), Error);
    p = sample_params();
    p.rabi_shape = PulseShape::constant;
    EXPECT_THROW(generate_features(p, 0.5, ExactMode{}), Error);
}

TEST(Generator, ShotsConvergeToExact) {
    const auto p = sample_params();
    const auto exact = output_probabilities(p, 0.6, ExactMode{});
    const auto shots = output_probabilities(p, 0.6, ShotsMode{1'000'000, 4});
    for (std::size_t i = 0; i < exact.size(); ++i) EXPECT_NEAR(shots[i], exact[i], 2e-3);
    const auto fe = generate_features(p, 0.6, ExactMode{});
    const auto fs = generate_features(p, 0.6, ShotsMode{1'000'000, 4});
    for (std::size_t i = 0; i < fe.size(); ++i) {
        // Skip bins sitting on the wrap boundary, where a tiny shift flips the residue.
        if (std::fmod(exact[i], 1.0 / 16) < 2e-3 || 1.0 / 16 - std::fmod(exact[i], 1.0 / 16) < 2e-3) continue;
        EXPECT_NEAR(fs[i], fe[i], 2e-3);
    }
}

TEST(Generator, ShotsReproduciblePerSeed) {
    const auto p = sample_params();
    EXPECT_EQ(generate_features(p, 0.6, ShotsMode{1000, 8}), generate_features(p, 0.6, ShotsMode{1000, 8}));
    EXPECT_NE(generate_features(p, 0.6, ShotsMode{1000, 8}), generate_features(p, 0.6, ShotsMode{1000, 9}));
}

TEST(Generator, NoisyDiffersAndLeavesParamsUntouched) {
    const auto p = sample_params();
    const auto copy = p;
    const NoisyMode noisy{ErrorModel{.rng_seed = 12}, std::nullopt};
    EXPECT_NE(generate_features(p, 0.5, noisy), generate_features(p, 0.5, ExactMode{}));
    EXPECT_EQ(p.rabi_param, copy.rabi_param);
    EXPECT_EQ(p.local_param, copy.local_param);
    EXPECT_EQ(p.global_detuning_offset, copy.global_detuning_offset);
    EXPECT_EQ(p.arrangement.positions[2].x, copy.arrangement.positions[2].x);
}

TEST(Generator, ModeForItemReseeds) {
    const GenerationMode shots = ShotsMode{1000, 5};
    const auto a = std::get<ShotsMode>(mode_for_item(shots, 0));
    const auto b = std::get<ShotsMode>(mode_for_item(shots, 1));
    EXPECT_NE(a.rng_seed, b.rng_seed);
    EXPECT_EQ(a.shots, 1000u);
    EXPECT_TRUE(std::holds_alternative<ExactMode>(mode_for_item(ExactMode{}, 3)));
}

TEST(PerturbParams, ZeroSigmaIsIdentity) {
    const auto p = sample_params();
    const auto q = perturb_params(p, ErrorModel{0.0, 0.0, 0.0, 99});
    EXPECT_EQ(q.rabi_param, p.rabi_param);
    EXPECT_EQ(q.local_param, p.local_param);
    EXPECT_EQ(q.global_detuning_offset, p.global_detuning_offset);
    for (std::size_t i = 0; i < p.arrangement.size(); ++i) {
        EXPECT_EQ(q.arrangement.positions[i].x, p.arrangement.positions[i].x);
        EXPECT_EQ(q.arrangement.positions[i].y, p.arrangement.positions[i].y);
    }
}

TEST(PerturbParams, Deterministic) {
    const auto p = sample_params();
    const auto a = perturb_params(p, ErrorModel{.rng_seed = 41});
    const auto b = perturb_params(p, ErrorModel{.rng_seed = 41});
    EXPECT_EQ(a.global_detuning_offset, b.global_detuning_offset);
    EXPECT_EQ(a.arrangement.positions[3].y, b.arrangement.positions[3].y);
}

TEST(PerturbParams, Statistics) {
    const auto p = sample_params();
    std::vector<double> global, local, rabi, x0;
    for (std::uint64_t s = 0; s < 10000; ++s) {
        const auto q = perturb_params(p, ErrorModel{.rng_seed = s});
        global.push_back(q.global_detuning_offset - p.global_detuning_offset);
        local.push_back(q.local_param - p.local_param);
        rabi.push_back(q.rabi_param / p.rabi_param);
        x0.push_back(q.arrangement.positions[0].x - p.arrangement.positions[0].x);
    }
    const auto g = moments(global);
    EXPECT_NEAR(g.stddev, 0.1, 0.005);
    EXPECT_NEAR(g.mean, 0.0, 0.005);
    EXPECT_NEAR(moments(local).stddev, 0.1, 0.005);
    EXPECT_NEAR(moments(rabi).mean, 1.0, 0.001);
    EXPECT_NEAR(moments(rabi).stddev, 0.01, 0.0005);
    EXPECT_GE(moments(x0).stddev, 0.095);
    EXPECT_LE(moments(x0).stddev, 0.105);
}

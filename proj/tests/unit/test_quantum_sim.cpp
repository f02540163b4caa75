#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "rydgan/error.hpp"
#include "rydgan/quantum_sim.hpp"

using namespace rydgan;

namespace {

constexpr double kPi = std::numbers::pi;

HamiltonianSpec constant_spec(std::vector<Coordinate> positions, double omega, double global = 0.0) {
    HamiltonianSpec s;
    s.arrangement.positions = std::move(positions);
    s.arrangement.couplings.assign(s.arrangement.positions.size(), 0.0);
    s.rabi = {PulseShape::constant, 0.0, omega, 1.0, PulseKind::rabi};
    s.local_detuning = {PulseShape::constant, 0.0, 0.0, 1.0, PulseKind::local_detuning};
    s.global_detuning_offset = global;
    return s;
}

HamiltonianSpec random_spec(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    HamiltonianSpec s;
    for (int i = 0; i < n; ++i) {
        s.arrangement.positions.push_back({5.0 + 6.5 * i + u(rng), 10.0 + 3.0 * u(rng)});
        s.arrangement.couplings.push_back(u(rng));
    }
    const PulseShape shapes[] = {PulseShape::linear, PulseShape::triangle, PulseShape::trapezoid,
                                 PulseShape::gaussian, PulseShape::sine_bump};
    s.rabi = {shapes[rng() % 5], 15.8 * (0.1 + 0.9 * u(rng)), 15.8 * u(rng), 1.0, PulseKind::rabi};
    s.local_detuning = {shapes[rng() % 5], -125.0 * (0.1 + 0.9 * u(rng)), -20.0 * u(rng), 1.0,
                        PulseKind::local_detuning};
    s.global_detuning_offset = 20.0 * (u(rng) - 0.5);
    return s;
}

}  // namespace

TEST(GroundState, Sizes) {
    const auto s4 = ground_state(4);
    ASSERT_EQ(s4.dimension(), 16u);
    EXPECT_EQ(s4.amplitudes()[0], Complex(1.0, 0.0));
    for (std::size_t k = 1; k < 16; ++k) EXPECT_EQ(s4.amplitudes()[k], Complex(0.0, 0.0));
    const auto s1 = ground_state(1);
    ASSERT_EQ(s1.dimension(), 2u);
    EXPECT_EQ(s1.amplitudes()[1], Complex(0.0, 0.0));
}

TEST(GroundState, RejectsOutOfRange) {
    EXPECT_THROW(ground_state(11), Error);
    EXPECT_THROW(ground_state(0), Error);
}

TEST(QuantumState, RejectsBadNormAndLength) {
    EXPECT_THROW(QuantumState(1, {Complex(1, 0), Complex(1, 0)}), Error);
    EXPECT_THROW(QuantumState(2, {Complex(1, 0), Complex(0, 0)}), Error);
}

TEST(Interaction, Values) {
    EXPECT_NEAR(interaction_strength({0, 0}, {10, 0}), 5420503.0 / 1e6, 1e-12);
    EXPECT_NEAR(interaction_strength({0, 0}, {4, 0}), 5420503.0 / 4096.0, 1e-9);
    EXPECT_NEAR(interaction_strength({0, 0}, {4, 0}), 1323.365, 1e-3);
    EXPECT_THROW(interaction_strength({0, 0}, {0, 0}), Error);
}

TEST(Interaction, StrictlyDecreasing) {
    double prev = interaction_strength({0, 0}, {1, 0});
    for (double r = 1.5; r < 80; r += 0.5) {
        const double v = interaction_strength({0, 0}, {r, 0});
        EXPECT_LT(v, prev);
        prev = v;
    }
}

TEST(Hamiltonian, SingleAtomDrive) {
    const auto h = build_hamiltonian(constant_spec({{0, 0}}, 3.0), 0.5);
    EXPECT_EQ(h(0, 0), Complex(0, 0));
    EXPECT_EQ(h(1, 1), Complex(0, 0));
    EXPECT_EQ(h(0, 1), Complex(1.5, 0));
    EXPECT_EQ(h(1, 0), Complex(1.5, 0));
}

TEST(Hamiltonian, InteractionOnlyOnDoubleExcitation) {
    const auto h = build_hamiltonian(constant_spec({{0, 0}, {10, 0}}, 0.0), 0.0);
    const double expected[] = {0, 0, 0, 5.420503};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i == j) {
                EXPECT_NEAR(h(i, i).real(), expected[i], 1e-12);
            } else {
                EXPECT_EQ(h(i, j), Complex(0, 0));
            }
        }
    }
}

TEST(Hamiltonian, DetuningDiagonal) {
    auto spec = constant_spec({{0, 0}}, 0.0, 2.0);
    spec.arrangement.couplings = {1.0};
    spec.local_detuning.param = -1.0;
    const auto h = build_hamiltonian(spec, 0.3);
    EXPECT_EQ(h(0, 0), Complex(0, 0));
    EXPECT_NEAR(h(1, 1).real(), -1.0, 1e-15);
}

TEST(Hamiltonian, BasisOrderingQubitZeroIsMostSignificant) {
    // Qubit 0 gets full local coupling; qubit 1 none.
    auto spec = constant_spec({{0, 0}, {50, 0}}, 0.0);
    spec.arrangement.couplings = {1.0, 0.0};
    spec.local_detuning.param = -3.0;
    const auto h = build_hamiltonian(spec, 0.5);
    EXPECT_NEAR(h(2, 2).real(), 3.0, 1e-12);  // |rg>
    EXPECT_NEAR(h(1, 1).real(), 0.0, 1e-12);  // |gr>
}

TEST(Hamiltonian, OutsideDurationIsDomainError) {
    auto spec = constant_spec({{0, 0}}, 1.0);
    spec.rabi.shape = PulseShape::linear;
    try {
        build_hamiltonian(spec, 1.5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::domain);
    }
}

TEST(Hamiltonian, ExactlyHermitian) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto spec = random_spec(rng, 1 + trial % 4);
        const auto h = build_hamiltonian(spec, u(rng));
        EXPECT_EQ((h - h.adjoint()).cwiseAbs().maxCoeff(), 0.0);
    }
}

TEST(Evolve, ZeroHamiltonianIsIdentity) {
    const std::vector<Complex> amps{Complex(0.6, 0), Complex(0, 0.8)};
    const QuantumState psi(1, amps);
    const auto out = evolve(psi, constant_spec({{0, 0}}, 0.0), 1.0, 100);
    for (int k = 0; k < 2; ++k) EXPECT_NEAR(std::abs(out.amplitudes()[k] - amps[k]), 0.0, 1e-14);
}

TEST(Evolve, RabiPiPulse) {
    const auto out = evolve(ground_state(1), constant_spec({{0, 0}}, kPi), 1.0, default_steps(1.0));
    EXPECT_NEAR(probabilities(out)[1], 1.0, 1e-6);
}

TEST(Evolve, RabiSweepMatchesAnalytic) {
    for (int i = 0; i < 20; ++i) {
        const double omega = 0.5 + 0.7 * i;
        const double t = 0.2 + 0.09 * i;
        auto spec = constant_spec({{0, 0}}, omega);
        spec.rabi.duration = spec.local_detuning.duration = t;
        const auto out = evolve(ground_state(1), spec, t, default_steps(t));
        EXPECT_NEAR(probabilities(out)[1], std::pow(std::sin(omega * t / 2), 2), 1e-6);
    }
}

TEST(Evolve, GroundStateIsDetuningEigenstate) {
    const auto out = evolve(ground_state(1), constant_spec({{0, 0}}, 0.0, 5.0), 1.0, 1000);
    const auto p = probabilities(out);
    EXPECT_NEAR(p[0], 1.0, 1e-14);
    EXPECT_NEAR(p[1], 0.0, 1e-14);
}

TEST(Evolve, MatchesMatrixExponentialOracle) {
    auto spec = constant_spec({{0, 0}, {6.2, 0}}, 4.0, 1.5);
    spec.arrangement.couplings = {0.3, 0.8};
    spec.local_detuning.param = -2.0;
    const std::vector<Complex> amps{Complex(0.5, 0), Complex(0, 0.5), Complex(-0.5, 0), Complex(0.5, 0)};
    const QuantumState psi(2, amps);
    const double t = 0.8;
    spec.rabi.duration = spec.local_detuning.duration = t;
    const auto out = evolve(psi, spec, t, 7);

    const Eigen::MatrixXcd h = build_hamiltonian(spec, 0.0);
    const Eigen::MatrixXcd u = (Complex(0, -t) * h).exp();
    Eigen::VectorXcd v(4);
    for (int k = 0; k < 4; ++k) v[k] = amps[k];
    const Eigen::VectorXcd expected = u * v;
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(out.amplitudes()[k] - expected[k]), 0.0, 1e-8);
}

TEST(Evolve, NormPreservedAndStepHalvingConverges) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        const auto spec = random_spec(rng, 4);
        const int steps = default_steps(1.0);
        const auto a = evolve(ground_state(4), spec, 1.0, steps);
        const auto b = evolve(ground_state(4), spec, 1.0, 2 * steps);
        EXPECT_NEAR(a.norm(), 1.0, 1e-9);
        const auto pa = probabilities(a);
        const auto pb = probabilities(b);
        for (std::size_t k = 0; k < pa.size(); ++k) EXPECT_NEAR(pa[k], pb[k], 1e-6);
    }
}

TEST(Evolve, Blockade) {
    const double omega = 2.5;
    const auto near = evolve(ground_state(2), constant_spec({{0, 0}, {4, 0}}, omega), 1.0, 1000);
    EXPECT_LT(probabilities(near)[3], 0.05);

    const auto far = evolve(ground_state(2), constant_spec({{0, 0}, {30, 0}}, omega), 1.0, 1000);
    const double single = std::pow(std::sin(omega / 2), 2);
    EXPECT_NEAR(probabilities(far)[3], single * single, 1e-3);
}

TEST(Evolve, RejectsBadArguments) {
    EXPECT_THROW(evolve(ground_state(1), constant_spec({{0, 0}}, 1.0), 1.0, 0), Error);
    EXPECT_THROW(evolve(ground_state(2), constant_spec({{0, 0}}, 1.0), 1.0, 10), Error);
}

TEST(Probabilities, Examples) {
    const double r = 1.0 / std::sqrt(2.0);
    auto p = probabilities(QuantumState(1, {Complex(r, 0), Complex(0, r)}));
    EXPECT_NEAR(p[0], 0.5, 1e-15);
    EXPECT_NEAR(p[1], 0.5, 1e-15);
    p = probabilities(QuantumState(1, {Complex(0.5, 0.5), Complex(0.5, -0.5)}));
    EXPECT_NEAR(p[0], 0.5, 1e-15);
    EXPECT_NEAR(p[1], 0.5, 1e-15);
    p = probabilities(ground_state(3));
    EXPECT_EQ(p[0], 1.0);
}

TEST(Shots, DeterministicGroundState) {
    const auto c = sample_shots(ground_state(4), 1000, 3);
    EXPECT_EQ(c[0], 1000u);
}

TEST(Shots, UniformConcentration) {
    const QuantumState uniform(2, std::vector<Complex>(4, Complex(0.5, 0)));
    const auto c = sample_shots(uniform, 1'000'000, 17);
    std::uint64_t total = 0;
    for (auto k : c) {
        total += k;
        EXPECT_NEAR(static_cast<double>(k) / 1e6, 0.25, 0.005);
    }
    EXPECT_EQ(total, 1'000'000u);
}

TEST(Shots, SameSeedSameCounts) {
    const QuantumState uniform(2, std::vector<Complex>(4, Complex(0.5, 0)));
    EXPECT_EQ(sample_shots(uniform, 1000, 9), sample_shots(uniform, 1000, 9));
    EXPECT_NE(sample_shots(uniform, 1000, 9), sample_shots(uniform, 1000, 10));
}

TEST(Shots, ZeroShotsRejected) {
    try {
        sample_shots(ground_state(1), 0, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::argument);
    }
}

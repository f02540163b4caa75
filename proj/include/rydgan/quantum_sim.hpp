#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rydgan/pulse.hpp"

namespace rydgan {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 10;
/// Van der Waals coefficient in rad/us * um^6.
inline constexpr double kDefaultC6 = 5'420'503.0;
inline constexpr int kDefaultStepsPerMicrosecond = 1000;

/// Normalized state vector over the computational basis. Basis index k
/// encodes qubit q in bit (n - 1 - q): qubit 0 is the most significant bit,
/// and a set bit means the atom is in the Rydberg state.
class QuantumState {
  public:
    /// Throws a state error if the length is not 2^n or the norm is off by
    /// more than 1e-9.
    QuantumState(int n_qubits, std::vector<Complex> amplitudes);

    int n_qubits() const noexcept { return n_qubits_; }
    std::size_t dimension() const noexcept { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    double norm() const;

  private:
    int n_qubits_;
    std::vector<Complex> amplitudes_;
};

QuantumState ground_state(int n_qubits);

struct Coordinate {
    double x = 0.0;  // um
    double y = 0.0;  // um
};

double distance(const Coordinate& a, const Coordinate& b);

struct ArrangementLimits {
    double min_spacing = 4.0;   // um
    double field_width = 75.0;  // um
    double field_height = 75.0; // um
};

struct AtomArrangement {
    std::vector<Coordinate> positions;
    std::vector<double> couplings;  // local-detuning weights h_i in [0, 1]

    std::size_t size() const noexcept { return positions.size(); }
};

/// Human-readable list of broken arrangement invariants; empty when valid.
std::vector<std::string> arrangement_violations(const AtomArrangement& arrangement,
                                                const ArrangementLimits& limits = {});

/// C6 / |a - b|^6 in rad/us. Throws for coincident atoms.
double interaction_strength(const Coordinate& a, const Coordinate& b, double c6 = kDefaultC6);

struct HamiltonianSpec {
    AtomArrangement arrangement;
    PulseProgram rabi;
    PulseProgram local_detuning{.kind = PulseKind::local_detuning};
    double global_detuning_offset = 0.0;  // rad/us, constant in time
    double phase = 0.0;
    double c6 = kDefaultC6;
};

/// Dense H(t) for the globally driven Rydberg Hamiltonian plus the local
/// detuning term. Hermitian by construction.
Eigen::MatrixXcd build_hamiltonian(const HamiltonianSpec& spec, double t);

int default_steps(double duration, int steps_per_us = kDefaultStepsPerMicrosecond);

/// Integrates i d|psi>/dt = H(t)|psi> (hbar = 1) over [0, duration] in
/// `steps` uniform steps, each split at pulse slope jumps and advanced by a
/// fourth-order commutator-free Magnus pair of exact Hermitian exponentials.
/// Exact for constant H; unitary up to rounding.
QuantumState evolve(const QuantumState& initial, const HamiltonianSpec& spec, double duration, int steps);

std::vector<double> probabilities(const QuantumState& state);

/// Multinomial measurement counts; deterministic for a fixed seed.
std::vector<std::uint64_t> sample_shots(const QuantumState& state, std::uint64_t shots, std::uint64_t rng_seed);

}  // namespace rydgan

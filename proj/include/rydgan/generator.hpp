#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rydgan/pulse.hpp"
#include "rydgan/quantum_sim.hpp"

namespace rydgan {

inline constexpr int kDefaultQubits = 4;
inline constexpr double kSeedMin = 0.1;
inline constexpr double kSeedMax = 1.0;

/// Trainable generator parameters plus the simulation settings they were
/// trained under.
struct GeneratorParams {
    AtomArrangement arrangement;
    PulseShape rabi_shape = PulseShape::linear;
    double rabi_param = 0.0;   // rad/us, in [0, rabi_max]
    PulseShape local_shape = PulseShape::linear;
    double local_param = 0.0;  // rad/us, in [local_detuning_min, 0]
    double global_detuning_offset = 0.0;  // rad/us
    double duration = 1.0;                // us
    double ramp_fraction = 0.05;
    double c6 = kDefaultC6;
    int steps_per_us = kDefaultStepsPerMicrosecond;

    int n_qubits() const noexcept { return static_cast<int>(arrangement.size()); }
};

struct HardwareLimits {
    PulseLimits pulse;
    ArrangementLimits arrangement;
};

std::vector<std::string> param_violations(const GeneratorParams& params, const HardwareLimits& limits = {});

/// Throws a config error carrying every violation.
void validate_params(const GeneratorParams& params, const HardwareLimits& limits = {});

/// Both drives for a given seed. The dimensionless seed z in [0.1, 1] is
/// shared: each pulse receives z times its kind's reference amplitude, with
/// the sign of that kind's legal range.
HamiltonianSpec make_hamiltonian_spec(const GeneratorParams& params, double seed);

struct ErrorModel {
    double detuning_sigma = 0.1;   // rad/us, additive on global and local detuning
    double rabi_rel_sigma = 0.01;  // multiplicative on the Rabi amplitude
    double position_sigma = 0.1;   // um, additive on every coordinate
    std::uint64_t rng_seed = 0;
};

/// Fresh copy with one Gaussian draw applied to every perturbed quantity.
/// The local-detuning shift is applied to the waveform parameter, before
/// the per-atom couplings.
GeneratorParams perturb_params(const GeneratorParams& params, const ErrorModel& model);

struct ExactMode {};

struct ShotsMode {
    std::uint64_t shots = 1000;
    std::uint64_t rng_seed = 0;
};

struct NoisyMode {
    ErrorModel model;
    std::optional<ShotsMode> shots;  // exact probabilities when empty
};

using GenerationMode = std::variant<ExactMode, ShotsMode, NoisyMode>;

/// Re-seeds any stochastic part of `mode` for item `index` of a batch.
GenerationMode mode_for_item(const GenerationMode& mode, std::uint64_t index);

/// f_i = p_i mod 2^-n, with exact multiples of 2^-n (p_i > 0) mapped to the
/// top of the window and p_i = 0 kept at 0.
std::vector<double> modulo_encode(std::span<const double> probabilities);

std::vector<double> output_probabilities(const GeneratorParams& params, double seed, const GenerationMode& mode,
                                         const HardwareLimits& limits = {});

std::vector<double> generate_features(const GeneratorParams& params, double seed, const GenerationMode& mode,
                                      const HardwareLimits& limits = {});

}  // namespace rydgan

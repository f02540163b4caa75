#include "rydgan/generator.hpp"

#include <cmath>
#include <random>

#include "rydgan/error.hpp"
#include "rydgan/rng.hpp"

namespace rydgan {

namespace {

void check_seed(double seed) {
    constexpr double slack = 1e-12;
    if (!(seed >= kSeedMin - slack && seed <= kSeedMax + slack)) {
        throw Error(ErrorKind::argument, "seed noise must lie in [0.1, 1.0], got " + std::to_string(seed));
    }
}

std::vector<double> probabilities_for(const GeneratorParams& params, double seed, const ShotsMode* shots) {
    const auto spec = make_hamiltonian_spec(params, seed);
    const int steps = default_steps(params.duration, params.steps_per_us);
    const auto state = evolve(ground_state(params.n_qubits()), spec, params.duration, steps);
    if (!shots) return probabilities(state);
    const auto counts = sample_shots(state, shots->shots, shots->rng_seed);
    std::vector<double> freq(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        freq[i] = static_cast<double>(counts[i]) / static_cast<double>(shots->shots);
    }
    return freq;
}

}  // namespace

std::vector<std::string> param_violations(const GeneratorParams& params, const HardwareLimits& limits) {
    auto out = arrangement_violations(params.arrangement, limits.arrangement);
    const int n = params.n_qubits();
    if (n > kMaxQubits) out.push_back("more than " + std::to_string(kMaxQubits) + " atoms");
    if (!(params.duration > 0.0)) out.emplace_back("duration must be positive");
    if (params.steps_per_us < 1) out.emplace_back("steps_per_us must be positive");
    if (!(params.c6 > 0.0)) out.emplace_back("c6 must be positive");
    if (!(params.rabi_param >= 0.0 && params.rabi_param <= limits.pulse.rabi_max)) {
        out.emplace_back("rabi_param outside [0, rabi_max]");
    }
    if (!(params.local_param <= 0.0 && params.local_param >= limits.pulse.local_detuning_min)) {
        out.emplace_back("local_param outside [local_detuning_min, 0]");
    }
    if (!(std::abs(params.global_detuning_offset) <= limits.pulse.global_detuning_max)) {
        out.emplace_back("global_detuning_offset exceeds bound");
    }
    if (params.rabi_shape == PulseShape::constant || params.local_shape == PulseShape::constant) {
        out.emplace_back("constant shape is reserved for the global detuning");
    }
    if (!(params.ramp_fraction > 0.0 && params.ramp_fraction <= 0.25)) {
        out.emplace_back("ramp_fraction must lie in (0, 0.25]");
    }
    return out;
}

void validate_params(const GeneratorParams& params, const HardwareLimits& limits) {
    const auto v = param_violations(params, limits);
    if (v.empty()) return;
    std::string msg = "invalid generator parameters:";
    for (const auto& s : v) msg += "\n  - " + s;
    throw Error(ErrorKind::config, msg);
}

HamiltonianSpec make_hamiltonian_spec(const GeneratorParams& params, double seed) {
    HamiltonianSpec spec;
    spec.arrangement = params.arrangement;
    spec.rabi = PulseProgram{.shape = params.rabi_shape,
                             .seed_noise = seed * kRabiMax,
                             .param = params.rabi_param,
                             .duration = params.duration,
                             .kind = PulseKind::rabi,
                             .ramp_fraction = params.ramp_fraction};
    spec.local_detuning = PulseProgram{.shape = params.local_shape,
                                       .seed_noise = -seed * kDetuningMax,
                                       .param = params.local_param,
                                       .duration = params.duration,
                                       .kind = PulseKind::local_detuning,
                                       .ramp_fraction = params.ramp_fraction};
    spec.global_detuning_offset = params.global_detuning_offset;
    spec.c6 = params.c6;
    return spec;
}

GeneratorParams perturb_params(const GeneratorParams& params, const ErrorModel& model) {
    GeneratorParams out = params;
    std::mt19937_64 rng(model.rng_seed);
    std::normal_distribution<double> unit(0.0, 1.0);
    // Draw order is fixed so that a given rng_seed always maps to the same shifts.
    out.global_detuning_offset += model.detuning_sigma * unit(rng);
    out.local_param += model.detuning_sigma * unit(rng);
    out.rabi_param *= 1.0 + model.rabi_rel_sigma * unit(rng);
    for (auto& p : out.arrangement.positions) {
        p.x += model.position_sigma * unit(rng);
        p.y += model.position_sigma * unit(rng);
    }
    return out;
}

GenerationMode mode_for_item(const GenerationMode& mode, std::uint64_t index) {
    if (const auto* s = std::get_if<ShotsMode>(&mode)) {
        return ShotsMode{s->shots, derive_seed(s->rng_seed, index)};
    }
    if (const auto* nm = std::get_if<NoisyMode>(&mode)) {
        NoisyMode out = *nm;
        out.model.rng_seed = derive_seed(nm->model.rng_seed, index);
        if (out.shots) out.shots->rng_seed = derive_seed(nm->shots->rng_seed, index);
        return out;
    }
    return mode;
}

std::vector<double> modulo_encode(std::span<const double> probabilities) {
    const std::size_t dim = probabilities.size();
    if (dim < 2 || (dim & (dim - 1)) != 0) throw Error(ErrorKind::shape, "probability vector length must be 2^n");
    double total = 0.0;
    for (double p : probabilities) {
        if (!(p >= 0.0)) throw Error(ErrorKind::argument, "negative or non-finite probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-6) throw Error(ErrorKind::argument, "probabilities must sum to 1");

    const double window = 1.0 / static_cast<double>(dim);
    std::vector<double> f(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const double p = probabilities[i];
        const double r = std::fmod(p, window);
        f[i] = r > 0.0 ? r : (p > 0.0 ? window : 0.0);
    }
    return f;
}

std::vector<double> output_probabilities(const GeneratorParams& params, double seed, const GenerationMode& mode,
                                         const HardwareLimits& limits) {
    validate_params(params, limits);
    check_seed(seed);
    if (std::holds_alternative<ExactMode>(mode)) return probabilities_for(params, seed, nullptr);
    if (const auto* s = std::get_if<ShotsMode>(&mode)) return probabilities_for(params, seed, s);
    const auto& noisy = std::get<NoisyMode>(mode);
    const auto perturbed = perturb_params(params, noisy.model);
    return probabilities_for(perturbed, seed, noisy.shots ? &*noisy.shots : nullptr);
}

std::vector<double> generate_features(const GeneratorParams& params, double seed, const GenerationMode& mode,
                                      const HardwareLimits& limits) {
    return modulo_encode(output_probabilities(params, seed, mode, limits));
}

}  // namespace rydgan

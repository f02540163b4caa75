#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rydgan/discriminator.hpp"
#include "rydgan/generator.hpp"
#include "rydgan/kernels.hpp"
#include "rydgan/nelder_mead.hpp"

namespace rydgan {

/// Parameter groups optimized one at a time by the layered scheme.
enum class ParamGroup { positions, rabi, local, global };

std::string_view to_string(ParamGroup group);
ParamGroup parse_param_group(std::string_view name);

struct TrainConfig {
    int n_qubits = kDefaultQubits;
    int cycles = 3;
    int nm_iters = 60;              // Nelder-Mead iterations per stage
    int disc_steps = 30;            // Adam steps before each generator stage
    int gen_batch = 16;             // seeds in the generator objective
    int disc_batch = 32;            // real and fake rows per discriminator step
    int hidden = 64;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-8;
    double nm_initial_step = 0.1;   // fraction of each parameter's box width
    std::vector<ParamGroup> stage_order{ParamGroup::positions, ParamGroup::rabi, ParamGroup::local,
                                        ParamGroup::global};
    double grid_spacing = 6.0;      // um, initial atom grid
    double position_jitter = 0.5;   // um, uniform +- jitter on the grid
    double ramp_fraction = 0.05;
    int steps_per_us = kDefaultStepsPerMicrosecond;
    double c6 = kDefaultC6;
    HardwareLimits limits;
    std::uint64_t master_seed = 0;
};

/// Throws a config error on the first violated invariant.
void validate_train_config(const TrainConfig& config);

struct Learner {
    std::string id;
    GeneratorParams params;
    double final_loss = 0.0;
    std::optional<double> validation_fid;
    std::optional<DiscriminatorNet> discriminator;
    std::uint64_t master_seed = 0;
};

std::string learner_id(PulseShape rabi, PulseShape local);

/// Initial generator: atoms on a square grid with uniform jitter, mid-range
/// pulse scalars, couplings drawn from [0, 1].
GeneratorParams initial_params(const TrainConfig& config, PulseShape rabi, PulseShape local);

/// Mean over seeds of -log D(G(seed)) using exact probabilities.
double generator_loss(const GeneratorParams& params, const DiscriminatorNet& net, std::span<const double> seeds,
                      const HardwareLimits& limits = {});

/// Flat view of one parameter group, with its hardware box.
std::vector<double> group_values(const GeneratorParams& params, ParamGroup group);
void set_group_values(GeneratorParams& params, ParamGroup group, std::span<const double> values);
Bounds group_bounds(const GeneratorParams& params, ParamGroup group, const HardwareLimits& limits);

struct TrainLogRow {
    int cycle = 0;
    std::string stage;
    int iteration = 0;  // Nelder-Mead iterations spent in the stage
    double generator_loss = 0.0;
    double discriminator_loss = 0.0;
};

struct TrainResult {
    Learner learner;
    GeneratorParams initial;
    std::vector<TrainLogRow> log;
    std::vector<ParamGroup> stages_run;
};

/// Draws `count` seeds uniformly from [kSeedMin, kSeedMax].
std::vector<double> draw_seeds(std::size_t count, std::uint64_t rng_seed);

/// Alternating adversarial training: Adam steps for the discriminator, then
/// a Nelder-Mead stage over one parameter group, cycling `stage_order`.
/// `class_features` are scaled PCA features of one class. Deterministic
/// given `config.master_seed`.
TrainResult layered_train(const TrainConfig& config, const RowMatrix& class_features, PulseShape rabi,
                          PulseShape local);

}  // namespace rydgan

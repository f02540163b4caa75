#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rydgan/generator.hpp"
#include "rydgan/training.hpp"

namespace rydgan {

enum class RunMode { ideal, noisy, shots };

std::string_view to_string(RunMode mode);
RunMode parse_run_mode(std::string_view name);

/// Everything a CLI run needs. Loaded from a flat INI file
/// (`key = value` under [section] headers); unknown keys are rejected.
struct RunConfig {
    // [data]
    std::filesystem::path train_images = "data/mnist5k-images-idx3-ubyte";
    std::filesystem::path train_labels = "data/mnist5k-labels-idx1-ubyte";
    double validation_fraction = 0.1;
    std::uint64_t split_seed = 7;
    int max_class_images = 0;  // 0 keeps every image of the class

    // [run]
    std::vector<int> classes{0};
    std::filesystem::path out_dir = "out";
    int jobs = 0;  // 0 leaves the OpenMP default
    std::uint64_t seed = 0;

    // [pca]
    int components = 0;  // 0 means 2^n_qubits

    // [pulse]
    std::vector<PulseShape> rabi_shapes{PulseShape::linear, PulseShape::triangle, PulseShape::trapezoid,
                                        PulseShape::gaussian, PulseShape::sine_bump};
    std::vector<PulseShape> local_shapes{PulseShape::linear, PulseShape::triangle, PulseShape::trapezoid,
                                         PulseShape::gaussian, PulseShape::sine_bump};

    // [train], [pulse], [geometry]
    TrainConfig train;

    // [noise]
    ErrorModel noise;

    // [generate]
    int count = 16;
    RunMode mode = RunMode::ideal;
    std::uint64_t shots = 1000;
    int fid_batch = 100;
    int montage_columns = 8;

    int n_qubits() const noexcept { return train.n_qubits; }
    int pca_components() const noexcept { return components > 0 ? components : (1 << train.n_qubits); }
};

/// Throws a config error describing every problem found.
void validate_run_config(const RunConfig& config);

RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& text, const std::string& source = "<config>");

/// Effective configuration in the same INI format.
std::string echo_config(const RunConfig& config);

}  // namespace rydgan

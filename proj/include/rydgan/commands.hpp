#pragma once

#include <filesystem>
#include <ostream>
#include <utility>

#include "rydgan/config.hpp"
#include "rydgan/data.hpp"
#include "rydgan/ensemble.hpp"
#include "rydgan/pca.hpp"

namespace rydgan {

/// Output layout under `out_dir`:
///   config.ini                       effective configuration
///   class<c>/pca.json                PCA + scaling model
///   class<c>/learners/<id>.json      trained learners
///   class<c>/logs/train_<id>.csv     per-stage training log
///   class<c>/ensemble.json           selected ensemble with FID trail
///   class<c>/generate/<mode>/        PGM images, montage, metrics
///   evaluate/                        ideal vs. noisy report
struct RunPaths {
    std::filesystem::path root;

    std::filesystem::path class_dir(int cls) const { return root / ("class" + std::to_string(cls)); }
    std::filesystem::path pca(int cls) const { return class_dir(cls) / "pca.json"; }
    std::filesystem::path learners(int cls) const { return class_dir(cls) / "learners"; }
    std::filesystem::path logs(int cls) const { return class_dir(cls) / "logs"; }
    std::filesystem::path ensemble(int cls) const { return class_dir(cls) / "ensemble.json"; }
    std::filesystem::path generated(int cls, RunMode mode) const {
        return class_dir(cls) / "generate" / std::string(to_string(mode));
    }
    std::filesystem::path evaluate() const { return root / "evaluate"; }
};

/// Train/validation split of one class, reproducible from the config.
std::pair<ImageSet, ImageSet> load_class_split(const RunConfig& config, int cls);

/// Generation mode for a CLI run; stochastic parts are seeded from `seed`.
GenerationMode make_generation_mode(const RunConfig& config, RunMode mode, std::uint64_t seed);

/// Seeds shared by selection and evaluation batches of one class.
std::vector<double> evaluation_seeds(const RunConfig& config, int cls, std::size_t count);

/// Learner files of a class in lexicographic order.
std::vector<std::filesystem::path> learner_files(const RunConfig& config, int cls);

void cmd_fit_pca(const RunConfig& config, std::ostream& log);
void cmd_train(const RunConfig& config, std::ostream& log);
void cmd_select(const RunConfig& config, std::ostream& log);
void cmd_generate(const RunConfig& config, std::ostream& log);
void cmd_evaluate(const RunConfig& config, std::ostream& log);

}  // namespace rydgan

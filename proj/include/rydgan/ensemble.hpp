#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rydgan/data.hpp"
#include "rydgan/metrics.hpp"
#include "rydgan/pca.hpp"
#include "rydgan/training.hpp"

namespace rydgan {

struct Ensemble {
    std::vector<Learner> members;
    double validation_fid = 0.0;
    std::vector<double> fid_trail;  // validation FID after each accepted member
};

/// Elementwise mean of every member's features for the same seed.
std::vector<double> ensemble_generate(const Ensemble& ensemble, double seed, const GenerationMode& mode,
                                      const HardwareLimits& limits = {});

/// Batch form; row i uses seeds[i].
RowMatrix ensemble_generate_batch(const Ensemble& ensemble, std::span<const double> seeds, const GenerationMode& mode,
                                  const HardwareLimits& limits = {});

/// Mean of the given learners' feature batches (all the same shape).
RowMatrix average_outputs(std::span<const RowMatrix> outputs, std::span<const std::size_t> members);

struct SelectionResult {
    std::vector<std::size_t> members;  // in order of acceptance
    std::vector<double> fid_trail;
    std::vector<double> singleton_fids;
};

using TrialScore = std::function<double(const RowMatrix& averaged_features)>;

/// Greedy forward selection over precomputed learner outputs. Starts from
/// the lowest-scoring single learner, then repeatedly adds the learner whose
/// averaged output strictly lowers the score the most; ties go to the
/// earlier learner. Stops when no addition strictly improves.
SelectionResult select_greedy(std::span<const RowMatrix> learner_outputs, const TrialScore& score);

/// Image-space FID of generated features against a fixed image set.
class ImageFidScorer {
  public:
    ImageFidScorer(const PcaModel& pca, const RowMatrix& reference_images, double jitter = kImageFidJitter);

    double operator()(const RowMatrix& features) const;

  private:
    const PcaModel* pca_;
    FidReference reference_;
};

/// Runs every learner on `batch_seeds`, then greedy selection scored by
/// image FID against `validation`. Members carry their single-learner FID.
Ensemble greedy_select(std::span<const Learner> learners, const ImageSet& validation,
                       std::span<const double> batch_seeds, const PcaModel& pca,
                       const GenerationMode& mode = ExactMode{}, const HardwareLimits& limits = {});

}  // namespace rydgan

#include "rydgan/ensemble.hpp"

#include <algorithm>
#include <optional>

#include "rydgan/error.hpp"

namespace rydgan {

std::vector<double> ensemble_generate(const Ensemble& ensemble, double seed, const GenerationMode& mode,
                                      const HardwareLimits& limits) {
    if (ensemble.members.empty()) throw Error(ErrorKind::argument, "ensemble has no members");
    std::vector<double> sum;
    for (const auto& m : ensemble.members) {
        const auto f = generate_features(m.params, seed, mode, limits);
        if (sum.empty()) sum.assign(f.size(), 0.0);
        if (f.size() != sum.size()) throw Error(ErrorKind::shape, "ensemble members disagree on qubit count");
        for (std::size_t i = 0; i < f.size(); ++i) sum[i] += f[i];
    }
    for (auto& v : sum) v /= static_cast<double>(ensemble.members.size());
    return sum;
}

RowMatrix ensemble_generate_batch(const Ensemble& ensemble, std::span<const double> seeds, const GenerationMode& mode,
                                  const HardwareLimits& limits) {
    if (ensemble.members.empty()) throw Error(ErrorKind::argument, "ensemble has no members");
    std::vector<RowMatrix> outputs;
    for (const auto& m : ensemble.members) {
        outputs.push_back(kernels::parallel::generate_batch(m.params, seeds, mode, limits));
    }
    std::vector<std::size_t> all(outputs.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return average_outputs(outputs, all);
}

RowMatrix average_outputs(std::span<const RowMatrix> outputs, std::span<const std::size_t> members) {
    if (members.empty()) throw Error(ErrorKind::argument, "no members to average");
    RowMatrix sum = outputs[members[0]];
    for (std::size_t i = 1; i < members.size(); ++i) {
        const auto& o = outputs[members[i]];
        if (o.rows() != sum.rows() || o.cols() != sum.cols()) throw Error(ErrorKind::shape, "learner outputs differ in shape");
        sum += o;
    }
    return sum / static_cast<double>(members.size());
}

SelectionResult select_greedy(std::span<const RowMatrix> learner_outputs, const TrialScore& score) {
    if (learner_outputs.empty()) throw Error(ErrorKind::argument, "greedy selection needs at least one learner");
    SelectionResult r;
    for (std::size_t i = 0; i < learner_outputs.size(); ++i) {
        const std::size_t one[] = {i};
        r.singleton_fids.push_back(score(average_outputs(learner_outputs, one)));
    }
    const auto best = static_cast<std::size_t>(
        std::min_element(r.singleton_fids.begin(), r.singleton_fids.end()) - r.singleton_fids.begin());
    r.members.push_back(best);
    double current = r.singleton_fids[best];
    r.fid_trail.push_back(current);

    for (;;) {
        std::optional<std::size_t> next;
        for (std::size_t cand = 0; cand < learner_outputs.size(); ++cand) {
            if (std::find(r.members.begin(), r.members.end(), cand) != r.members.end()) continue;
            auto trial = r.members;
            trial.push_back(cand);
            const double f = score(average_outputs(learner_outputs, trial));
            if (f < current) {
                next = cand;
                current = f;
            }
        }
        if (!next) break;
        r.members.push_back(*next);
        r.fid_trail.push_back(current);
    }
    return r;
}

ImageFidScorer::ImageFidScorer(const PcaModel& pca, const RowMatrix& reference_images, double jitter)
    : pca_(&pca), reference_(summarize(reference_images), jitter) {}

double ImageFidScorer::operator()(const RowMatrix& features) const {
    return reference_.distance_to(summarize(features_to_images(*pca_, features)));
}

Ensemble greedy_select(std::span<const Learner> learners, const ImageSet& validation,
                       std::span<const double> batch_seeds, const PcaModel& pca, const GenerationMode& mode,
                       const HardwareLimits& limits) {
    if (learners.empty()) throw Error(ErrorKind::argument, "greedy selection needs at least one learner");
    if (validation.size() < 2) throw Error(ErrorKind::argument, "validation set needs at least two images");
    if (batch_seeds.size() < 2) throw Error(ErrorKind::argument, "FID batches need at least two seeds");

    std::vector<RowMatrix> outputs;
    for (const auto& l : learners) outputs.push_back(kernels::parallel::generate_batch(l.params, batch_seeds, mode, limits));

    const ImageFidScorer scorer(pca, validation.pixels);
    const auto sel = select_greedy(outputs, std::cref(scorer));

    Ensemble e;
    for (std::size_t idx : sel.members) {
        Learner l = learners[idx];
        l.validation_fid = sel.singleton_fids[idx];
        e.members.push_back(std::move(l));
    }
    e.fid_trail = sel.fid_trail;
    e.validation_fid = sel.fid_trail.back();
    return e;
}

}  // namespace rydgan

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ubknn/dataset.hpp"
#include "ubknn/knn.hpp"
#include "ubknn/sampler.hpp"

namespace ubknn {

/// Hyper-parameters of the under-bagging k-NN ensemble.
struct UnderBagConfig {
    int rounds = 10;               // bagging rounds B >= 1
    int k = 5;                     // neighbors per round >= 1
    double s = 0.0;                // expected subsample size, 1 <= s <= M*n_(1)
    std::uint64_t master_seed = 0; // per-round seeds derive from this
    int threads = 1;               // fit/predict parallelism; results identical for any value

    void validate(const Dataset& ds) const;
};

/// B independently under-sampled rounds, one k-NN base learner per nonempty
/// round, uniformly averaged posteriors, argmax decision. Round b is
/// reproducible from (master_seed, b) alone; posterior sums run in round
/// order, so results are bit-identical regardless of thread count.
class UnderBagModel {
public:
    UnderBagModel() = default;

    static UnderBagModel fit(const Dataset& ds, const UnderBagConfig& cfg);

    /// Uniform average of the round posteriors. Rounds with fewer than k
    /// accepted points contribute deficient mass (empty rounds contribute
    /// zero), so the total is (1/B) * sum_b min(k, s_b)/k.
    Posterior posterior(std::span<const double> x) const;

    int classify(std::span<const double> x) const;

    /// Elementwise classify/posterior over the rows of X, parallel over
    /// queries when cfg.threads > 1.
    std::vector<int> predict_batch(const Matrix& X, std::vector<Posterior>* posteriors = nullptr) const;

    const UnderBagConfig& config() const { return config_; }
    int num_classes() const { return num_classes_; }
    int dim() const { return dim_; }

    int round_count() const { return static_cast<int>(rounds_.size()); }
    /// nullptr for an empty round.
    const KnnModel* round_model(int b) const {
        return rounds_[b].model.has_value() ? &*rounds_[b].model : nullptr;
    }
    const SubSample& round_sample(int b) const { return rounds_[b].sample; }
    Posterior round_posterior(int b, std::span<const double> x) const;

    /// Versioned binary container: config, dataset fingerprint, and the
    /// accepted indices of every round, so predictions are replayable.
    void save(const std::string& path) const;
    static UnderBagModel load(const std::string& path, const Dataset& ds);

private:
    struct Round {
        SubSample sample;
        std::optional<KnnModel> model;
    };

    static UnderBagModel assemble(const Dataset& ds, const UnderBagConfig& cfg,
                                  std::vector<SubSample> samples);

    std::vector<Round> rounds_;
    UnderBagConfig config_;
    int num_classes_ = 0;
    int dim_ = 0;
    std::uint64_t data_fingerprint_ = 0;
};

} // namespace ubknn

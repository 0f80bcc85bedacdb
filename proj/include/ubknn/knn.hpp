#pragma once

#include <span>
#include <vector>

#include "ubknn/dataset.hpp"
#include "ubknn/kdtree.hpp"

namespace ubknn {

/// Length-M class-score vector. Entries lie in [0,1]; the total mass is
/// min(k, indexed points)/k, so it is sub-stochastic when a subsample holds
/// fewer than k points (each available neighbor still weighs 1/k, never
/// renormalized).
using Posterior = std::vector<double>;

/// Smallest class id among the maximizers.
int argmax_class(const Posterior& probs);

/// k-NN posterior estimator over a row subset of a dataset: standard k-NN,
/// the under-sampling k-NN, and the per-round base learner of the ensemble.
/// Immutable after fit; concurrent queries are safe.
class KnnModel {
public:
    KnnModel() = default;

    /// Indexes exactly ds rows `indices`. k is kept as given even when it
    /// exceeds the subset size; posterior() then yields deficient mass.
    static KnnModel fit(const Dataset& ds, std::span<const int> indices, int k);

    /// probs[m-1] = (1/k) * #{neighbors among first min(k, size) with label m}
    Posterior posterior(std::span<const double> x) const;

    /// argmax of posterior; ties to the smallest class id.
    int classify(std::span<const double> x) const;

    /// Neighbors of x within the indexed subset (kk clamped to the subset
    /// size), indices mapped back to dataset rows.
    NeighborList neighbors(std::span<const double> x, int kk) const;

    int k() const { return k_; }
    int num_classes() const { return num_classes_; }
    std::int64_t size() const { return tree_.size(); }
    /// Effective neighbor count min(k, size).
    int effective_k() const;
    int label_of(int tree_index) const { return labels_[tree_index]; }
    const std::vector<int>& rows() const { return rows_; }

private:
    KdTree tree_;
    std::vector<int> labels_; // tree-local order
    std::vector<int> rows_;   // tree-local index -> dataset row
    int k_ = 0;
    int num_classes_ = 0;
};

} // namespace ubknn

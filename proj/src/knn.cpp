#include "ubknn/knn.hpp"

#include <algorithm>

#include "ubknn/errors.hpp"

namespace ubknn {

int argmax_class(const Posterior& probs) {
    int best = 1;
    for (int m = 2; m <= static_cast<int>(probs.size()); ++m)
        if (probs[m - 1] > probs[best - 1]) best = m;
    return best;
}

KnnModel KnnModel::fit(const Dataset& ds, std::span<const int> indices, int k) {
    if (indices.empty()) throw ConfigError("knn: cannot fit on empty index set");
    if (k < 1) throw ConfigError("knn: k must be >= 1");

    Matrix points(static_cast<std::int64_t>(indices.size()), ds.dim());
    KnnModel model;
    model.labels_.reserve(indices.size());
    model.rows_.assign(indices.begin(), indices.end());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        auto src = ds.point(indices[i]);
        std::copy(src.begin(), src.end(), points.row(static_cast<std::int64_t>(i)).begin());
        model.labels_.push_back(ds.label(indices[i]));
    }
    model.tree_ = KdTree::build(std::move(points));
    model.k_ = k;
    model.num_classes_ = ds.num_classes();
    return model;
}

int KnnModel::effective_k() const {
    return static_cast<int>(std::min<std::int64_t>(k_, tree_.size()));
}

Posterior KnnModel::posterior(std::span<const double> x) const {
    Posterior probs(static_cast<std::size_t>(num_classes_), 0.0);
    const int q = effective_k();
    const NeighborList nn = tree_.query(x, q);
    const double w = 1.0 / static_cast<double>(k_);
    for (int i = 0; i < q; ++i) probs[labels_[nn.indices[i]] - 1] += w;
    return probs;
}

int KnnModel::classify(std::span<const double> x) const { return argmax_class(posterior(x)); }

NeighborList KnnModel::neighbors(std::span<const double> x, int kk) const {
    const int q = static_cast<int>(std::min<std::int64_t>(kk, tree_.size()));
    NeighborList nn = tree_.query(x, q);
    for (auto& idx : nn.indices) idx = rows_[idx];
    return nn;
}

} // namespace ubknn

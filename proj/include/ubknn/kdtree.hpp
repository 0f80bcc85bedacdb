#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ubknn/matrix.hpp"

namespace ubknn {

/// k nearest neighbors of a query, sorted by (distance, index) ascending.
/// Ties in distance resolve to the smaller point index, which makes results
/// bit-identical to a brute-force scan under the same rule.
struct NeighborList {
    std::vector<int> indices;
    std::vector<double> distances;

    std::size_t size() const { return indices.size(); }
};

/// Static exact Euclidean k-NN index. Median split on the widest-spread
/// dimension gives O(n log n) construction and logarithmic-depth search.
/// Immutable after build; concurrent queries are safe.
class KdTree {
public:
    static constexpr int kDefaultLeafSize = 16;

    /// Takes ownership of the point matrix. Throws ConfigError on empty input.
    static KdTree build(Matrix points, int leaf_size = kDefaultLeafSize);

    /// Exact k nearest neighbors of x. Requires 1 <= k <= n.
    NeighborList query(std::span<const double> x, int k) const;

    std::int64_t size() const { return points_.rows; }
    int dim() const { return points_.cols; }
    std::span<const double> point(int i) const { return points_.row(i); }

private:
    struct Node {
        int split_dim = -1;   // -1 marks a leaf
        double split_value = 0.0;
        int left = -1, right = -1;
        int begin = 0, end = 0; // leaf range into perm_
    };

    int build_node(int begin, int end);

    struct Heap; // bounded best-k accumulator, see kdtree.cpp
    void search(const Node& node, std::span<const double> x, Heap& heap,
                std::vector<double>& axis_dist) const;

    Matrix points_;
    std::vector<int> perm_;
    std::vector<Node> nodes_;
    int leaf_size_ = kDefaultLeafSize;
};

} // namespace ubknn

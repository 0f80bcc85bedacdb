#include "ubknn/kdtree.hpp"

#include <algorithm>
#include <cmath>

#include "ubknn/errors.hpp"

namespace ubknn {

namespace {

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = a[j] - b[j];
        acc += diff * diff;
    }
    return acc;
}

} // namespace

/// Max-heap on (squared distance, index); the worst kept candidate sits on
/// top. A candidate with equal distance but smaller index counts as better.
struct KdTree::Heap {
    struct Entry {
        double d2;
        int idx;
    };
    std::vector<Entry> entries;
    std::size_t capacity;

    explicit Heap(std::size_t k) : capacity(k) { entries.reserve(k); }

    static bool better(const Entry& a, const Entry& b) {
        return a.d2 < b.d2 || (a.d2 == b.d2 && a.idx < b.idx);
    }
    static bool heap_cmp(const Entry& a, const Entry& b) { return better(a, b); }

    bool full() const { return entries.size() == capacity; }
    double worst() const { return entries.front().d2; }

    void offer(double d2, int idx) {
        Entry e{d2, idx};
        if (!full()) {
            entries.push_back(e);
            std::push_heap(entries.begin(), entries.end(), heap_cmp);
        } else if (better(e, entries.front())) {
            std::pop_heap(entries.begin(), entries.end(), heap_cmp);
            entries.back() = e;
            std::push_heap(entries.begin(), entries.end(), heap_cmp);
        }
    }
};

KdTree KdTree::build(Matrix points, int leaf_size) {
    if (points.rows == 0) throw ConfigError("kdtree: cannot build on empty point set");
    if (points.cols < 1) throw ConfigError("kdtree: dimension must be >= 1");
    if (leaf_size < 1) throw ConfigError("kdtree: leaf_size must be >= 1");

    KdTree tree;
    tree.points_ = std::move(points);
    tree.leaf_size_ = leaf_size;
    tree.perm_.resize(static_cast<std::size_t>(tree.points_.rows));
    for (std::size_t i = 0; i < tree.perm_.size(); ++i) tree.perm_[i] = static_cast<int>(i);
    tree.nodes_.reserve(2 * tree.perm_.size() / static_cast<std::size_t>(leaf_size) + 2);
    tree.build_node(0, static_cast<int>(tree.perm_.size()));
    return tree;
}

int KdTree::build_node(int begin, int end) {
    const int node_id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    const int count = end - begin;
    if (count <= leaf_size_) {
        nodes_[node_id].begin = begin;
        nodes_[node_id].end = end;
        return node_id;
    }

    // Split on the dimension with the widest spread over this range.
    int best_dim = 0;
    double best_spread = -1.0;
    for (int dim = 0; dim < points_.cols; ++dim) {
        double lo = points_.at(perm_[begin], dim);
        double hi = lo;
        for (int i = begin + 1; i < end; ++i) {
            const double v = points_.at(perm_[i], dim);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double spread = hi - lo;
        if (spread > best_spread) {
            best_spread = spread;
            best_dim = dim;
        }
    }
    if (best_spread <= 0.0) {
        // All points identical; further splitting cannot make progress.
        nodes_[node_id].begin = begin;
        nodes_[node_id].end = end;
        return node_id;
    }

    // Median split keeps the depth logarithmic regardless of duplicates:
    // [begin, mid) holds coordinates <= split value, [mid, end) >=, and both
    // halves are nonempty because count >= 2.
    const int mid = begin + count / 2;
    std::nth_element(perm_.begin() + begin, perm_.begin() + mid, perm_.begin() + end,
                     [this, best_dim](int a, int b) {
                         return points_.at(a, best_dim) < points_.at(b, best_dim);
                     });
    nodes_[node_id].split_dim = best_dim;
    nodes_[node_id].split_value = points_.at(perm_[mid], best_dim);
    const int left = build_node(begin, mid);
    const int right = build_node(mid, end);
    nodes_[node_id].left = left;
    nodes_[node_id].right = right;
    return node_id;
}

void KdTree::search(const Node& node, std::span<const double> x, Heap& heap,
                    std::vector<double>& axis_dist) const {
    if (node.split_dim < 0) {
        for (int i = node.begin; i < node.end; ++i) {
            const int idx = perm_[i];
            heap.offer(squared_distance(x, points_.row(idx)), idx);
        }
        return;
    }

    const double diff = x[node.split_dim] - node.split_value;
    const Node& near = diff <= 0.0 ? nodes_[node.left] : nodes_[node.right];
    const Node& far = diff <= 0.0 ? nodes_[node.right] : nodes_[node.left];

    search(near, x, heap, axis_dist);

    // Lower bound on the distance to any point in the far subtree: per-axis
    // squared offsets, with this axis tightened to the splitting plane. The
    // sum runs in fixed axis order, exactly like squared_distance, so the
    // bound never exceeds a candidate's computed distance. Visiting on <=
    // keeps equal-distance candidates with smaller indices reachable.
    const double saved = axis_dist[node.split_dim];
    const double plane = diff * diff;
    if (plane > saved) axis_dist[node.split_dim] = plane;
    double bound = 0.0;
    for (double v : axis_dist) bound += v;
    if (!heap.full() || bound <= heap.worst()) search(far, x, heap, axis_dist);
    axis_dist[node.split_dim] = saved;
}

NeighborList KdTree::query(std::span<const double> x, int k) const {
    if (k < 1) throw ConfigError("kdtree: k must be >= 1");
    if (static_cast<std::int64_t>(k) > points_.rows)
        throw ConfigError("kdtree: k=" + std::to_string(k) + " exceeds indexed points n=" +
                          std::to_string(points_.rows));
    if (static_cast<int>(x.size()) != points_.cols)
        throw ConfigError("kdtree: query dimension mismatch");

    Heap heap(static_cast<std::size_t>(k));
    std::vector<double> axis_dist(static_cast<std::size_t>(points_.cols), 0.0);
    search(nodes_[0], x, heap, axis_dist);

    std::sort(heap.entries.begin(), heap.entries.end(), Heap::better);
    NeighborList out;
    out.indices.reserve(heap.entries.size());
    out.distances.reserve(heap.entries.size());
    for (const auto& e : heap.entries) {
        out.indices.push_back(e.idx);
        out.distances.push_back(std::sqrt(e.d2));
    }
    return out;
}

} // namespace ubknn

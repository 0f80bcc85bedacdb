#pragma once

#include <cstdint>
#include <vector>

#include "ubknn/dataset.hpp"

namespace ubknn {

/// Per-class Bernoulli acceptance probabilities, each in (0,1].
struct AcceptanceRule {
    std::vector<double> per_class_prob;

    double prob_for(int label) const { return per_class_prob[label - 1]; }

    /// Expected accepted count: sum over classes of a_m * n_(m).
    double expected_size(const Dataset& ds) const;
};

/// Accepted row indices of one sampling round, strictly increasing.
/// Reproducible from (dataset, rule, round_seed).
struct SubSample {
    std::vector<int> indices;
    std::uint64_t round_seed = 0;
};

/// a_m = n_(1)/n_(m): expected class sizes equalize at n_(1) and the
/// minority class is always kept whole.
AcceptanceRule undersample_rule(const Dataset& ds);

/// a_m = s/(M*n_(m)) with 1 <= s <= M*n_(1): expected accepted count per
/// class is s/M, expected total is exactly s. At s = M*n_(1) this coincides
/// with undersample_rule.
AcceptanceRule underbag_rule(const Dataset& ds, double s);

/// Accepts row i independently with probability a_{label(i)}. An empty
/// accepted set is legal output. Bit-reproducible for a fixed seed.
SubSample draw(const Dataset& ds, const AcceptanceRule& rule, std::uint64_t seed);

} // namespace ubknn

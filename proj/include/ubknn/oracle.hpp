#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ubknn/dataset.hpp"
#include "ubknn/kdtree.hpp"
#include "ubknn/knn.hpp"
#include "ubknn/sampler.hpp"

namespace ubknn {
namespace oracle {

/// Full-scan k-NN sorted by (distance, index): the reference the k-d tree is
/// checked against. Deliberately shares no code with KdTree.
NeighborList brute_knn(const Matrix& points, std::span<const double> x, int k);

/// Parameters of the Generalized Pascal distribution: trial index of the
/// j-th success in independent Bernoulli trials with success probabilities
/// probs[0..n-1].
struct GPParams {
    std::vector<double> probs; // each in (0,1]
    int j = 1;
};

/// P(the j-th success occurs exactly at trial i), i 1-based. Zero for i < j.
/// Dynamic programming over Poisson-binomial partial counts, O(i*j).
double gp_pmf(const GPParams& params, int i);

/// f[i-1][j-1] = gp_pmf for trial i, success count j, all i in [1, n] and
/// j in [1, j_max], in one O(n*j_max) forward pass.
std::vector<std::vector<double>> gp_pmf_table(std::span<const double> probs, int j_max);

/// P(fewer than j successes in the first len(probs) trials) i.e. the truncated
/// tail mass 1 - sum_i f_GP(i; j, p).
double gp_tail(const GPParams& params);

/// Exact infinite-bagging neighbor weights at a query point: vbar[r] is the
/// expected per-round weight of the (r+1)-th nearest neighbor of x in the
/// full data, vbar[r] = (1/k) * sum_{j=1..k} f_GP(r+1; j, p) with
/// p_r = a_{label of that neighbor}. `order[r]` is the dataset row at
/// neighbor rank r (distance ties by smaller row).
struct BaggedWeights {
    std::vector<double> vbar;
    std::vector<int> order;
};

BaggedWeights exact_bagged_weights(const Dataset& ds, const AcceptanceRule& rule,
                                   std::span<const double> x, int k);

/// B -> infinity limit of the under-bagging posterior:
/// probs[m-1] = sum_r vbar[r] * 1{label(order[r]) = m}.
Posterior infinite_bag_posterior(const Dataset& ds, const AcceptanceRule& rule,
                                 std::span<const double> x, int k);

/// eta^w_m = (eta_m/pi_m) / sum_j (eta_j/pi_j). Sums to 1; invariant under
/// positive rescaling of pi.
std::vector<double> weighted_posterior(std::span<const double> eta, std::span<const double> pi);

/// eta^u_m = (eta_m/n_(m)) / sum_j (eta_j/n_(j)); equals weighted_posterior
/// when class counts are exactly proportional to priors.
std::vector<double> undersampled_posterior(std::span<const double> eta,
                                           std::span<const std::int64_t> class_counts);

/// Synthetic distribution with a known posterior on the unit cube:
/// X ~ Uniform[0,1]^d, P(Y=m|X=x) = eta(x)[m-1]. pi[m-1] = E[eta_m(X)],
/// exact for the shipped presets.
struct SyntheticTruth {
    int d = 0;
    std::vector<double> pi;
    std::function<std::vector<double>(std::span<const double>)> eta;
};

/// argmax_m eta^w_m(x), ties to the smallest class id. In the binary case
/// this is sign(eta_1(x) - pi_1) mapped to {1, 2}.
int bayes_balanced_classify(const SyntheticTruth& truth, std::span<const double> x);

struct AmRegretEstimate {
    double regret = 0.0;     // AM(bayes-balanced) - AM(candidate) on the sample
    double std_error = 0.0;  // Monte-Carlo standard error of the difference
    double am_candidate = 0.0;
    double am_bayes = 0.0;
};

/// Estimates the AM regret of `classify` against the Bayes-balanced
/// classifier on a fresh sample of `n_mc` labeled points drawn from truth
/// (paired on the same sample, which cancels most of the Monte-Carlo noise).
AmRegretEstimate am_regret(const SyntheticTruth& truth,
                           const std::function<int(std::span<const double>)>& classify,
                           std::int64_t n_mc, std::uint64_t seed);

} // namespace oracle
} // namespace ubknn

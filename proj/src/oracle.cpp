#include "ubknn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ubknn/errors.hpp"
#include "ubknn/rng.hpp"

namespace ubknn {
namespace oracle {

NeighborList brute_knn(const Matrix& points, std::span<const double> x, int k) {
    if (k < 1 || static_cast<std::int64_t>(k) > points.rows)
        throw ConfigError("brute_knn: k out of range");
    std::vector<std::pair<double, int>> all;
    all.reserve(static_cast<std::size_t>(points.rows));
    for (std::int64_t i = 0; i < points.rows; ++i) {
        auto p = points.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double diff = x[j] - p[j];
            acc += diff * diff;
        }
        all.emplace_back(acc, static_cast<int>(i));
    }
    std::partial_sort(all.begin(), all.begin() + k, all.end());
    NeighborList out;
    out.indices.reserve(k);
    out.distances.reserve(k);
    for (int i = 0; i < k; ++i) {
        out.indices.push_back(all[i].second);
        out.distances.push_back(std::sqrt(all[i].first));
    }
    return out;
}

namespace {

void check_gp_params(std::span<const double> probs, int j) {
    if (j < 1) throw ConfigError("gp: j must be >= 1");
    for (double p : probs)
        if (!(p > 0.0) || p > 1.0) throw ConfigError("gp: probabilities must lie in (0,1]");
}

} // namespace

std::vector<std::vector<double>> gp_pmf_table(std::span<const double> probs, int j_max) {
    check_gp_params(probs, j_max);
    const int n = static_cast<int>(probs.size());
    std::vector<std::vector<double>> f(n, std::vector<double>(j_max, 0.0));

    // count[t] = P(t successes among trials 1..i-1), t capped at j_max-1.
    std::vector<double> count(static_cast<std::size_t>(j_max), 0.0);
    count[0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        const double p = probs[i - 1];
        for (int j = 1; j <= j_max; ++j) f[i - 1][j - 1] = p * count[j - 1];
        for (int t = std::min(i, j_max - 1); t >= 1; --t)
            count[t] = count[t] * (1.0 - p) + count[t - 1] * p;
        count[0] *= (1.0 - p);
    }
    return f;
}

double gp_pmf(const GPParams& params, int i) {
    check_gp_params(params.probs, params.j);
    if (i < params.j) return 0.0; // j successes cannot fit in fewer trials
    if (i < 1 || i > static_cast<int>(params.probs.size()))
        throw ConfigError("gp_pmf: trial index out of range");

    std::vector<double> count(static_cast<std::size_t>(params.j), 0.0);
    count[0] = 1.0;
    for (int l = 1; l < i; ++l) {
        const double p = params.probs[l - 1];
        for (int t = std::min(l, params.j - 1); t >= 1; --t)
            count[t] = count[t] * (1.0 - p) + count[t - 1] * p;
        count[0] *= (1.0 - p);
    }
    return params.probs[i - 1] * count[params.j - 1];
}

double gp_tail(const GPParams& params) {
    check_gp_params(params.probs, params.j);
    // P(sum of all trials < j) via the same partial-count recursion.
    std::vector<double> count(static_cast<std::size_t>(params.j), 0.0);
    count[0] = 1.0;
    for (double p : params.probs) {
        for (int t = params.j - 1; t >= 1; --t)
            count[t] = count[t] * (1.0 - p) + count[t - 1] * p;
        count[0] *= (1.0 - p);
    }
    return std::accumulate(count.begin(), count.end(), 0.0);
}

BaggedWeights exact_bagged_weights(const Dataset& ds, const AcceptanceRule& rule,
                                   std::span<const double> x, int k) {
    if (k < 1 || static_cast<std::int64_t>(k) > ds.n())
        throw ConfigError("exact_bagged_weights: k out of range");

    BaggedWeights out;
    const NeighborList nn = brute_knn(ds.features(), x, static_cast<int>(ds.n()));
    out.order = nn.indices;

    std::vector<double> probs(out.order.size());
    for (std::size_t r = 0; r < out.order.size(); ++r)
        probs[r] = rule.prob_for(ds.label(out.order[r]));

    const auto f = gp_pmf_table(probs, k);
    out.vbar.assign(out.order.size(), 0.0);
    const double w = 1.0 / static_cast<double>(k);
    for (std::size_t r = 0; r < out.order.size(); ++r) {
        double sum = 0.0;
        for (int j = 1; j <= k; ++j) sum += f[r][j - 1];
        out.vbar[r] = w * sum;
    }
    return out;
}

Posterior infinite_bag_posterior(const Dataset& ds, const AcceptanceRule& rule,
                                 std::span<const double> x, int k) {
    const BaggedWeights bw = exact_bagged_weights(ds, rule, x, k);
    Posterior probs(static_cast<std::size_t>(ds.num_classes()), 0.0);
    for (std::size_t r = 0; r < bw.order.size(); ++r)
        probs[ds.label(bw.order[r]) - 1] += bw.vbar[r];
    return probs;
}

std::vector<double> weighted_posterior(std::span<const double> eta, std::span<const double> pi) {
    if (eta.size() != pi.size()) throw ConfigError("weighted_posterior: size mismatch");
    std::vector<double> out(eta.size());
    double denom = 0.0;
    for (std::size_t m = 0; m < eta.size(); ++m) {
        if (!(pi[m] > 0.0)) throw ConfigError("weighted_posterior: priors must be positive");
        out[m] = eta[m] / pi[m];
        denom += out[m];
    }
    for (double& v : out) v /= denom;
    return out;
}

std::vector<double> undersampled_posterior(std::span<const double> eta,
                                           std::span<const std::int64_t> class_counts) {
    std::vector<double> counts(class_counts.size());
    for (std::size_t m = 0; m < class_counts.size(); ++m)
        counts[m] = static_cast<double>(class_counts[m]);
    return weighted_posterior(eta, counts);
}

int bayes_balanced_classify(const SyntheticTruth& truth, std::span<const double> x) {
    const std::vector<double> eta = truth.eta(x);
    return argmax_class(weighted_posterior(eta, truth.pi));
}

AmRegretEstimate am_regret(const SyntheticTruth& truth,
                           const std::function<int(std::span<const double>)>& classify,
                           std::int64_t n_mc, std::uint64_t seed) {
    const int M = static_cast<int>(truth.pi.size());
    Rng rng(seed);
    std::vector<double> x(static_cast<std::size_t>(truth.d));

    // Per class: count, candidate hits, bayes hits, and sum of squared
    // per-sample differences for the paired standard error.
    std::vector<std::int64_t> cnt(M, 0), hit_cand(M, 0), hit_bayes(M, 0);
    std::vector<double> diff_sq(M, 0.0);

    for (std::int64_t i = 0; i < n_mc; ++i) {
        for (int c = 0; c < truth.d; ++c) x[c] = rng.uniform();
        const std::vector<double> eta = truth.eta(x);
        const double u = rng.uniform();
        int y = M;
        double cum = 0.0;
        for (int m = 1; m <= M; ++m) {
            cum += eta[m - 1];
            if (u < cum) {
                y = m;
                break;
            }
        }
        const int cand = classify(x);
        const int bayes = bayes_balanced_classify(truth, x);
        cnt[y - 1]++;
        if (cand == y) hit_cand[y - 1]++;
        if (bayes == y) hit_bayes[y - 1]++;
        const double diff = (bayes == y ? 1.0 : 0.0) - (cand == y ? 1.0 : 0.0);
        diff_sq[y - 1] += diff * diff;
    }

    AmRegretEstimate est;
    double var_sum = 0.0;
    for (int m = 0; m < M; ++m) {
        if (cnt[m] == 0)
            throw DataError("am_regret: class " + std::to_string(m + 1) +
                            " absent from the Monte-Carlo sample");
        const double nm = static_cast<double>(cnt[m]);
        const double rc = static_cast<double>(hit_cand[m]) / nm;
        const double rb = static_cast<double>(hit_bayes[m]) / nm;
        est.am_candidate += rc;
        est.am_bayes += rb;
        const double mean_diff = rb - rc;
        const double var = diff_sq[m] / nm - mean_diff * mean_diff;
        var_sum += std::max(0.0, var) / nm;
    }
    est.am_candidate /= M;
    est.am_bayes /= M;
    est.regret = est.am_bayes - est.am_candidate;
    est.std_error = std::sqrt(var_sum) / M;
    return est;
}

} // namespace oracle
} // namespace ubknn

#pragma once

#include <cstdint>

#include "ubknn/dataset.hpp"
#include "ubknn/oracle.hpp"

namespace ubknn {

/// Two interleaving half circles with isotropic Gaussian noise. Class 1
/// ("major") sits on the upper unit arc (cos t, sin t), t in [0, pi];
/// class 2 ("minor") on the arc shifted by (1, -0.5) and flipped vertically,
/// i.e. (1 + cos t, 0.5 - sin t). The offset is a convention constant, not a
/// claim about any particular published figure.
struct TwoMoonsSpec {
    std::int64_t n_major = 0;
    std::int64_t n_minor = 0;
    double noise_sd = 0.2;
    std::uint64_t seed = 0;
};

Dataset gen_two_moons(const TwoMoonsSpec& spec);

/// Uniform-cube data with a known smooth posterior: X ~ Uniform[0,1]^d,
/// Y ~ eta(X). The truth object carries the exact priors for regret
/// estimation.
struct CubeSpec {
    std::int64_t n = 0;
    oracle::SyntheticTruth truth;
    std::uint64_t seed = 0;
};

struct CubeData {
    Dataset data;
    oracle::SyntheticTruth truth;
};

CubeData gen_cube(const CubeSpec& spec);

/// Binary preset with eta_1(x) = pi1 + amplitude * sin(2*pi*x_1): Lipschitz
/// (alpha = 1), exact priors (pi1, 1-pi1), decision boundary of the
/// Bayes-balanced classifier at sin(2*pi*x_1) = 0. Requires
/// amplitude <= min(pi1, 1-pi1) so eta stays inside [0,1].
oracle::SyntheticTruth make_sine_truth(int d, double pi1, double amplitude);

} // namespace ubknn

#include "ubknn/generators.hpp"

#include <cmath>

#include "ubknn/errors.hpp"
#include "ubknn/rng.hpp"

namespace ubknn {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Dataset gen_two_moons(const TwoMoonsSpec& spec) {
    if (spec.n_major < 1 || spec.n_minor < 1)
        throw ConfigError("two_moons: both class counts must be >= 1");
    if (spec.noise_sd < 0.0) throw ConfigError("two_moons: noise_sd must be >= 0");

    const std::int64_t n = spec.n_major + spec.n_minor;
    Matrix features(n, 2);
    std::vector<int> labels(static_cast<std::size_t>(n));
    Rng rng(spec.seed);

    for (std::int64_t i = 0; i < n; ++i) {
        const bool major = i < spec.n_major;
        const double t = rng.uniform() * kPi;
        double x, y;
        if (major) {
            x = std::cos(t);
            y = std::sin(t);
        } else {
            x = 1.0 + std::cos(t);
            y = 0.5 - std::sin(t);
        }
        if (spec.noise_sd > 0.0) {
            x += spec.noise_sd * rng.gaussian();
            y += spec.noise_sd * rng.gaussian();
        }
        features.at(i, 0) = x;
        features.at(i, 1) = y;
        labels[static_cast<std::size_t>(i)] = major ? 1 : 2;
    }
    return Dataset::from_parts(std::move(features), std::move(labels), {"major", "minor"});
}

oracle::SyntheticTruth make_sine_truth(int d, double pi1, double amplitude) {
    if (d < 1) throw ConfigError("sine_truth: d must be >= 1");
    if (!(pi1 > 0.0) || !(pi1 < 1.0)) throw ConfigError("sine_truth: pi1 must lie in (0,1)");
    if (amplitude < 0.0 || amplitude > std::min(pi1, 1.0 - pi1))
        throw ConfigError("sine_truth: amplitude must lie in [0, min(pi1, 1-pi1)]");

    oracle::SyntheticTruth truth;
    truth.d = d;
    truth.pi = {pi1, 1.0 - pi1};
    truth.eta = [pi1, amplitude](std::span<const double> x) {
        const double e1 = pi1 + amplitude * std::sin(2.0 * kPi * x[0]);
        return std::vector<double>{e1, 1.0 - e1};
    };
    return truth;
}

CubeData gen_cube(const CubeSpec& spec) {
    if (spec.n < 1) throw ConfigError("gen_cube: n must be >= 1");
    if (spec.truth.d < 1 || !spec.truth.eta) throw ConfigError("gen_cube: truth is not set up");
    const int M = static_cast<int>(spec.truth.pi.size());
    if (M < 2) throw ConfigError("gen_cube: need at least 2 classes");

    Matrix features(spec.n, spec.truth.d);
    std::vector<int> labels(static_cast<std::size_t>(spec.n));
    Rng rng(spec.seed);
    std::vector<double> x(static_cast<std::size_t>(spec.truth.d));

    for (std::int64_t i = 0; i < spec.n; ++i) {
        for (int c = 0; c < spec.truth.d; ++c) {
            x[c] = rng.uniform();
            features.at(i, c) = x[c];
        }
        const std::vector<double> eta = spec.truth.eta(x);
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
        labels[static_cast<std::size_t>(i)] = y;
    }
    std::vector<bool> seen(static_cast<std::size_t>(M), false);
    for (int y : labels) seen[y - 1] = true;
    for (int m = 0; m < M; ++m)
        if (!seen[m])
            throw DataError("gen_cube: class " + std::to_string(m + 1) +
                            " drew no samples; increase n");
    return CubeData{Dataset::from_parts(std::move(features), std::move(labels)), spec.truth};
}

} // namespace ubknn

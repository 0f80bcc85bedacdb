#pragma once

#include <cstdint>
#include <string>

namespace ubknn {

/// Smoothness regime of the posterior: Hoelder exponent alpha in (0,1] and
/// ambient dimension d. alpha defaults to 1 (Lipschitz) in callers since it
/// is unknown in practice.
struct SmoothnessSpec {
    double alpha = 1.0;
    int d = 1;

    void validate() const;
};

enum class Regime {
    Undersampling,
    Underbagging,
    Bag1nnHighDim, // k = 1, d > 2*alpha
    Bag1nnLowDim,  // k = 1, d <= 2*alpha
};

std::string regime_name(Regime r);

/// Closed-form parameter choice. All logs are natural; proportionality
/// constants default to 1 and are exposed as multipliers for tuning.
struct ParamChoice {
    int k = 1;
    double s = 1.0; // integral value after ceil
    int B = 1;
    Regime regime = Regime::Underbagging;
};

/// k = round(k_mult * s_u^{2a/(2a+d)} * (ln s_u)^{d/(2a+d)}), clamped to
/// [1, s_u]. s_u is the (under-)sample size the classifier trains on.
/// Requires s_u >= 3.
int choose_undersampling_k(std::int64_t s_u, const SmoothnessSpec& spec, double k_mult = 1.0);

/// Expected subsample size s, rounds B = max(1, round(rho*n/s)), and
/// k = round(s * (ln(rho n)/(rho n))^{d/(2a+d)}):
///   d >  2a: s = ceil((rho n)^{d/(2a+d)} * (ln rho n)^{2a/(2a+d)})
///   d <= 2a: s = ceil(sqrt(rho n * ln(rho n)))
/// s is clamped to [1, M*n_(1)] (= rho*n) and k to [1, s].
/// Requires rho*n >= 3.
ParamChoice choose_underbagging(std::int64_t n, double rho, const SmoothnessSpec& spec,
                                double s_mult = 1.0, double k_mult = 1.0);

/// k = 1 variant:
///   d >  2a: s = (rho n)^{d/(2a+d)} (ln rho n)^{(2a-d)/(2a+d)},
///            B = (rho n)^{2a/(2a+d)} (ln rho n)^{(d-2a)/(2a+d)}
///   d <= 2a: s = sqrt(rho n * ln(rho n)), B = sqrt(rho n / ln(rho n))
/// Rounding and clamping as above. Requires rho*n >= 3.
ParamChoice choose_bag1nn(std::int64_t n, double rho, const SmoothnessSpec& spec,
                          double s_mult = 1.0);

} // namespace ubknn

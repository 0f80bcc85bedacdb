#include "ubknn/params.hpp"

#include <algorithm>
#include <cmath>

#include "ubknn/errors.hpp"

namespace ubknn {

namespace {

// round-half-up, for determinism across platforms
std::int64_t round_half_up(double x) { return static_cast<std::int64_t>(std::floor(x + 0.5)); }

double rho_n_checked(std::int64_t n, double rho) {
    if (n < 1) throw ConfigError("params: n must be >= 1");
    if (!(rho > 0.0) || rho > 1.0) throw ConfigError("params: rho must lie in (0,1]");
    const double rn = rho * static_cast<double>(n);
    if (rn < 3.0) throw ConfigError("params: rho*n must be >= 3");
    return rn;
}

} // namespace

void SmoothnessSpec::validate() const {
    if (!(alpha > 0.0) || alpha > 1.0) throw ConfigError("params: alpha must lie in (0,1]");
    if (d < 1) throw ConfigError("params: d must be >= 1");
}

std::string regime_name(Regime r) {
    switch (r) {
    case Regime::Undersampling: return "undersampling";
    case Regime::Underbagging: return "underbagging";
    case Regime::Bag1nnHighDim: return "bag1nn-highdim";
    case Regime::Bag1nnLowDim: return "bag1nn-lowdim";
    }
    return "unknown";
}

int choose_undersampling_k(std::int64_t s_u, const SmoothnessSpec& spec, double k_mult) {
    spec.validate();
    if (s_u < 3) throw ConfigError("params: s_u must be >= 3");
    const double a2 = 2.0 * spec.alpha;
    const double denom = a2 + spec.d;
    const double su = static_cast<double>(s_u);
    const double raw = k_mult * std::pow(su, a2 / denom) * std::pow(std::log(su), spec.d / denom);
    const std::int64_t k = std::clamp<std::int64_t>(round_half_up(raw), 1, s_u);
    return static_cast<int>(k);
}

ParamChoice choose_underbagging(std::int64_t n, double rho, const SmoothnessSpec& spec,
                                double s_mult, double k_mult) {
    spec.validate();
    const double rn = rho_n_checked(n, rho);
    const double log_rn = std::log(rn);
    const double a2 = 2.0 * spec.alpha;
    const double denom = a2 + spec.d;

    double s_raw;
    if (spec.d > a2) {
        s_raw = std::pow(rn, spec.d / denom) * std::pow(log_rn, a2 / denom);
    } else {
        s_raw = std::sqrt(rn * log_rn);
    }
    // s_max = M*n_(1) = rho*n up to floating error; snap to the integer.
    const std::int64_t s_max = std::max<std::int64_t>(1, round_half_up(rn));
    const std::int64_t s_int =
        std::clamp<std::int64_t>(static_cast<std::int64_t>(std::ceil(s_mult * s_raw)), 1, s_max);

    ParamChoice choice;
    choice.regime = Regime::Underbagging;
    choice.s = static_cast<double>(s_int);
    choice.B = static_cast<int>(std::max<std::int64_t>(1, round_half_up(rn / choice.s)));
    const double k_raw = k_mult * choice.s * std::pow(log_rn / rn, spec.d / denom);
    choice.k = static_cast<int>(std::clamp<std::int64_t>(round_half_up(k_raw), 1, s_int));
    return choice;
}

ParamChoice choose_bag1nn(std::int64_t n, double rho, const SmoothnessSpec& spec, double s_mult) {
    spec.validate();
    const double rn = rho_n_checked(n, rho);
    const double log_rn = std::log(rn);
    const double a2 = 2.0 * spec.alpha;
    const double denom = a2 + spec.d;

    ParamChoice choice;
    choice.k = 1;
    double s_raw, b_raw;
    if (spec.d > a2) {
        choice.regime = Regime::Bag1nnHighDim;
        s_raw = std::pow(rn, spec.d / denom) * std::pow(log_rn, (a2 - spec.d) / denom);
        b_raw = std::pow(rn, a2 / denom) * std::pow(log_rn, (spec.d - a2) / denom);
    } else {
        choice.regime = Regime::Bag1nnLowDim;
        s_raw = std::sqrt(rn * log_rn);
        b_raw = std::sqrt(rn / log_rn);
    }
    const std::int64_t s_max = std::max<std::int64_t>(1, round_half_up(rn));
    const std::int64_t s_int =
        std::clamp<std::int64_t>(static_cast<std::int64_t>(std::ceil(s_mult * s_raw)), 1, s_max);
    choice.s = static_cast<double>(s_int);
    choice.B = static_cast<int>(std::max<std::int64_t>(1, round_half_up(b_raw)));
    return choice;
}

} // namespace ubknn

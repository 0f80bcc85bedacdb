#include "ubknn/sampler.hpp"

#include <string>

#include "ubknn/errors.hpp"
#include "ubknn/rng.hpp"

namespace ubknn {

double AcceptanceRule::expected_size(const Dataset& ds) const {
    double total = 0.0;
    for (int m = 1; m <= ds.num_classes(); ++m)
        total += per_class_prob[m - 1] * static_cast<double>(ds.class_count(m));
    return total;
}

AcceptanceRule undersample_rule(const Dataset& ds) {
    AcceptanceRule rule;
    const double n1 = static_cast<double>(ds.minority_count());
    rule.per_class_prob.reserve(ds.num_classes());
    for (int m = 1; m <= ds.num_classes(); ++m)
        rule.per_class_prob.push_back(n1 / static_cast<double>(ds.class_count(m)));
    return rule;
}

AcceptanceRule underbag_rule(const Dataset& ds, double s) {
    const double s_max = static_cast<double>(ds.num_classes()) *
                         static_cast<double>(ds.minority_count());
    if (s < 1.0 || s > s_max)
        throw ConfigError("underbag_rule: s=" + std::to_string(s) + " outside [1, M*n_(1)=" +
                          std::to_string(s_max) + "]");
    AcceptanceRule rule;
    rule.per_class_prob.reserve(ds.num_classes());
    for (int m = 1; m <= ds.num_classes(); ++m)
        rule.per_class_prob.push_back(
            s / (static_cast<double>(ds.num_classes()) * static_cast<double>(ds.class_count(m))));
    return rule;
}

SubSample draw(const Dataset& ds, const AcceptanceRule& rule, std::uint64_t seed) {
    if (static_cast<int>(rule.per_class_prob.size()) != ds.num_classes())
        throw ConfigError("draw: rule class count does not match dataset");
    for (double a : rule.per_class_prob)
        if (!(a > 0.0) || a > 1.0) throw ConfigError("draw: acceptance probability outside (0,1]");

    SubSample out;
    out.round_seed = seed;
    Rng rng(seed);
    for (std::int64_t i = 0; i < ds.n(); ++i) {
        const double u = rng.uniform();
        if (u < rule.prob_for(ds.label(i))) out.indices.push_back(static_cast<int>(i));
    }
    return out;
}

} // namespace ubknn

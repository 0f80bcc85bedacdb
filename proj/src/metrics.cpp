#include "ubknn/metrics.hpp"

#include <sstream>

#include "ubknn/errors.hpp"

namespace ubknn {

EvalReport evaluate(std::span<const int> true_labels, std::span<const int> predicted_labels,
                    int M) {
    if (true_labels.size() != predicted_labels.size())
        throw ConfigError("evaluate: label vectors differ in length");
    if (true_labels.empty()) throw ConfigError("evaluate: empty label vectors");
    if (M < 1) throw ConfigError("evaluate: M must be >= 1");

    EvalReport report;
    report.confusion.assign(M, std::vector<std::int64_t>(M, 0));
    const std::int64_t n = static_cast<std::int64_t>(true_labels.size());
    for (std::int64_t i = 0; i < n; ++i) {
        const int t = true_labels[i];
        const int p = predicted_labels[i];
        if (t < 1 || t > M || p < 1 || p > M)
            throw ConfigError("evaluate: label outside {1..M}");
        report.confusion[t - 1][p - 1]++;
    }

    std::vector<std::int64_t> row_sums(M, 0);
    for (int m = 0; m < M; ++m)
        for (int c = 0; c < M; ++c) row_sums[m] += report.confusion[m][c];
    for (int m = 0; m < M; ++m)
        if (row_sums[m] == 0)
            throw DataError("evaluate: class " + std::to_string(m + 1) +
                            " absent from true labels; recall undefined");

    report.recalls.resize(M);
    std::int64_t correct = 0;
    for (int m = 0; m < M; ++m) {
        report.recalls[m] =
            static_cast<double>(report.confusion[m][m]) / static_cast<double>(row_sums[m]);
        correct += report.confusion[m][m];
        report.am += report.recalls[m];
    }
    report.am /= M;
    report.accuracy = static_cast<double>(correct) / static_cast<double>(n);

    // Balanced risk from the per-sample balanced loss with empirical
    // frequencies pi_m = row_sums[m]/n; this makes am == 1 - balanced_risk an
    // exact finite-sample identity (checked by the test suite, not assumed).
    std::vector<double> pi(M);
    for (int m = 0; m < M; ++m) pi[m] = static_cast<double>(row_sums[m]) / static_cast<double>(n);
    double loss_sum = 0.0;
    for (std::int64_t i = 0; i < n; ++i)
        loss_sum += balanced_loss(true_labels[i], predicted_labels[i], pi);
    report.balanced_risk = loss_sum / static_cast<double>(n);
    return report;
}

double balanced_loss(int true_label, int predicted_label, std::span<const double> pi) {
    if (true_label < 1 || true_label > static_cast<int>(pi.size()))
        throw ConfigError("balanced_loss: true label outside {1..M}");
    if (predicted_label == true_label) return 0.0;
    const double p = pi[true_label - 1];
    if (!(p > 0.0)) throw ConfigError("balanced_loss: pi of the true class must be positive");
    return 1.0 / (static_cast<double>(pi.size()) * p);
}

nlohmann::json EvalReport::to_json() const {
    nlohmann::json j;
    j["confusion"] = confusion;
    j["recalls"] = recalls;
    j["am"] = am;
    j["balanced_risk"] = balanced_risk;
    j["accuracy"] = accuracy;
    j["fit_seconds"] = fit_seconds;
    j["predict_seconds"] = predict_seconds;
    return j;
}

std::string EvalReport::csv_header() {
    return "am,balanced_risk,accuracy,fit_seconds,predict_seconds,recalls";
}

std::string EvalReport::csv_row() const {
    std::ostringstream out;
    out.precision(12);
    out << am << ',' << balanced_risk << ',' << accuracy << ',' << fit_seconds << ','
        << predict_seconds << ',';
    for (std::size_t m = 0; m < recalls.size(); ++m) {
        if (m) out << ';';
        out << recalls[m];
    }
    return out.str();
}

} // namespace ubknn

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace ubknn {

/// Evaluation summary for one prediction set. The AM measure is the
/// arithmetic mean of per-class recalls, and with empirical class
/// frequencies as priors it equals 1 - balanced_risk exactly.
struct EvalReport {
    std::vector<std::vector<std::int64_t>> confusion; // [true][predicted], M x M
    std::vector<double> recalls;                      // recalls[m-1]
    double am = 0.0;
    double balanced_risk = 0.0;
    double accuracy = 0.0;
    double fit_seconds = 0.0;
    double predict_seconds = 0.0;

    nlohmann::json to_json() const;
    static std::string csv_header();
    std::string csv_row() const;
};

/// Confusion matrix, per-class recalls, AM, accuracy, and the empirical
/// balanced risk (computed directly from the balanced loss with empirical
/// class frequencies, not via 1 - AM). Every class 1..M must occur among
/// the true labels, otherwise its recall is undefined.
EvalReport evaluate(std::span<const int> true_labels, std::span<const int> predicted_labels, int M);

/// 1{pred != truth} / (M * pi_truth).
double balanced_loss(int true_label, int predicted_label, std::span<const double> pi);

} // namespace ubknn

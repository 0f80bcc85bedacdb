#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "ubknn/dataset.hpp"
#include "ubknn/ensemble.hpp"
#include "ubknn/metrics.hpp"

namespace ubknn {

enum class Method { Knn, UndersampleKnn, UnderbagKnn };

Method parse_method(const std::string& name);
std::string method_name(Method m);

/// One experiment run: method, hyper-parameters, cross-validation shape.
/// k == 0 with auto_params set derives k (and s, B for the ensemble) from
/// the closed-form theory choices at the given alpha.
struct ExperimentConfig {
    Method method = Method::UnderbagKnn;
    int k = 0;
    int rounds = 5;        // B, ensemble only
    double s_frac = 1.0;   // s = s_frac * M * n_(1) unless s_abs > 0
    double s_abs = 0.0;
    bool auto_params = false;
    double alpha = 1.0;
    int folds = 10;
    int repeats = 2;
    std::uint64_t seed = 0;
    int threads = 1;
    bool scale_per_fold = false; // min-max from the train fold applied to both sides

    nlohmann::json to_json() const;
};

/// Copies the given rows into a standalone Dataset (labels keep their ids;
/// every class must remain represented).
Dataset subset(const Dataset& ds, std::span<const int> rows);

/// Fits the configured method on train_rows and evaluates on test_rows.
/// fit_seconds covers sampling plus index construction, predict_seconds the
/// queries. Deterministic for fixed (cfg, split_seed) regardless of threads.
EvalReport fit_eval_split(const Dataset& ds, std::span<const int> train_rows,
                          std::span<const int> test_rows, const ExperimentConfig& cfg,
                          std::uint64_t split_seed);

struct FoldOutcome {
    int repeat = 0;
    int fold = 0;
    EvalReport report;
};

struct CvSummary {
    std::vector<FoldOutcome> folds;
    double am_mean = 0.0;
    double am_sd = 0.0;
    double fit_seconds_mean = 0.0;
    double predict_seconds_mean = 0.0;

    nlohmann::json to_json() const;
};

/// repeats x folds stratified cross-validation of the configured method.
CvSummary run_cv(const Dataset& ds, const ExperimentConfig& cfg);

/// Validation-AM curve over a k grid, estimated by inner stratified
/// cross-validation on the given rows. Ties resolve to the smaller k.
/// The grid is swept with a single neighbor query per point at max(k_grid),
/// so tuning costs one run, not |grid| runs.
struct TuneResult {
    int best_k = 1;
    std::vector<double> am_per_k;
};

TuneResult tune_k(const Dataset& ds, std::span<const int> rows, Method method,
                  const std::vector<int>& k_grid, int rounds, double s, int folds,
                  std::uint64_t seed, int threads);

} // namespace ubknn

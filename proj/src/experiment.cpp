#include "ubknn/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ubknn/errors.hpp"
#include "ubknn/parallel.hpp"
#include "ubknn/params.hpp"
#include "ubknn/rng.hpp"

namespace ubknn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Matrix copy_rows(const Matrix& m, std::span<const int> rows) {
    Matrix out(static_cast<std::int64_t>(rows.size()), m.cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto src = m.row(rows[i]);
        std::copy(src.begin(), src.end(), out.row(static_cast<std::int64_t>(i)).begin());
    }
    return out;
}

std::vector<int> iota_rows(std::int64_t n) {
    std::vector<int> rows(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = static_cast<int>(i);
    return rows;
}

} // namespace

Method parse_method(const std::string& name) {
    if (name == "knn") return Method::Knn;
    if (name == "undersample-knn") return Method::UndersampleKnn;
    if (name == "underbag-knn") return Method::UnderbagKnn;
    throw ConfigError("unknown method: " + name +
                      " (expected knn | undersample-knn | underbag-knn)");
}

std::string method_name(Method m) {
    switch (m) {
    case Method::Knn: return "knn";
    case Method::UndersampleKnn: return "undersample-knn";
    case Method::UnderbagKnn: return "underbag-knn";
    }
    return "unknown";
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["method"] = method_name(method);
    j["k"] = k;
    j["rounds"] = rounds;
    j["s_frac"] = s_frac;
    j["s_abs"] = s_abs;
    j["auto_params"] = auto_params;
    j["alpha"] = alpha;
    j["folds"] = folds;
    j["repeats"] = repeats;
    j["seed"] = seed;
    j["threads"] = threads;
    j["scale_per_fold"] = scale_per_fold;
    j["rng"] = rng_id();
    return j;
}

Dataset subset(const Dataset& ds, std::span<const int> rows) {
    if (rows.empty()) throw ConfigError("subset: empty row set");
    Matrix features = copy_rows(ds.features(), rows);
    std::vector<int> labels(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) labels[i] = ds.label(rows[i]);
    return Dataset::from_parts(std::move(features), std::move(labels), ds.label_names());
}

EvalReport fit_eval_split(const Dataset& ds, std::span<const int> train_rows,
                          std::span<const int> test_rows, const ExperimentConfig& cfg,
                          std::uint64_t split_seed) {
    if (train_rows.empty() || test_rows.empty())
        throw ConfigError("fit_eval_split: empty train or test rows");

    Matrix train_features = copy_rows(ds.features(), train_rows);
    Matrix test_features = copy_rows(ds.features(), test_rows);
    if (cfg.scale_per_fold) {
        const auto all = iota_rows(train_features.rows);
        const MinMaxScaler scaler = MinMaxScaler::fit(train_features, all);
        scaler.apply(train_features);
        scaler.apply(test_features);
    }
    std::vector<int> train_labels(train_rows.size());
    for (std::size_t i = 0; i < train_rows.size(); ++i) train_labels[i] = ds.label(train_rows[i]);
    const Dataset train_ds =
        Dataset::from_parts(std::move(train_features), std::move(train_labels), ds.label_names());

    std::vector<int> true_labels(test_rows.size());
    for (std::size_t i = 0; i < test_rows.size(); ++i) true_labels[i] = ds.label(test_rows[i]);

    const SmoothnessSpec smooth{cfg.alpha, ds.dim()};
    std::vector<int> predicted(test_rows.size(), 0);
    double fit_seconds = 0.0, predict_seconds = 0.0;

    auto predict_with_knn = [&](const KnnModel& model) {
        parallel_for(0, test_features.rows, cfg.threads, [&](std::int64_t i) {
            predicted[static_cast<std::size_t>(i)] = model.classify(test_features.row(i));
        });
    };

    switch (cfg.method) {
    case Method::Knn: {
        int k = cfg.k;
        if (k <= 0) {
            if (!cfg.auto_params) throw ConfigError("knn: k not set (use auto_params or give k)");
            k = choose_undersampling_k(train_ds.n(), smooth);
        }
        const auto t0 = Clock::now();
        const KnnModel model = KnnModel::fit(train_ds, iota_rows(train_ds.n()), k);
        fit_seconds = seconds_since(t0);
        const auto t1 = Clock::now();
        predict_with_knn(model);
        predict_seconds = seconds_since(t1);
        break;
    }
    case Method::UndersampleKnn: {
        const auto t0 = Clock::now();
        const AcceptanceRule rule = undersample_rule(train_ds);
        const SubSample sub = draw(train_ds, rule, mix_seed(split_seed, 1));
        int k = cfg.k;
        if (k <= 0) {
            if (!cfg.auto_params)
                throw ConfigError("undersample-knn: k not set (use auto_params or give k)");
            k = choose_undersampling_k(static_cast<std::int64_t>(sub.indices.size()), smooth);
        }
        const KnnModel model = KnnModel::fit(train_ds, sub.indices, k);
        fit_seconds = seconds_since(t0);
        const auto t1 = Clock::now();
        predict_with_knn(model);
        predict_seconds = seconds_since(t1);
        break;
    }
    case Method::UnderbagKnn: {
        UnderBagConfig ub;
        ub.master_seed = mix_seed(split_seed, 2);
        ub.threads = cfg.threads;
        const double s_max = static_cast<double>(train_ds.num_classes()) *
                             static_cast<double>(train_ds.minority_count());
        if (cfg.auto_params && cfg.k <= 0) {
            const ParamChoice choice =
                choose_underbagging(train_ds.n(), imbalance_ratio(train_ds), smooth);
            ub.k = choice.k;
            ub.s = choice.s;
            ub.rounds = choice.B;
        } else {
            if (cfg.k <= 0) throw ConfigError("underbag-knn: k not set");
            ub.k = cfg.k;
            ub.rounds = cfg.rounds;
            ub.s = cfg.s_abs > 0.0 ? cfg.s_abs : cfg.s_frac * s_max;
        }
        const auto t0 = Clock::now();
        const UnderBagModel model = UnderBagModel::fit(train_ds, ub);
        fit_seconds = seconds_since(t0);
        const auto t1 = Clock::now();
        predicted = model.predict_batch(test_features);
        predict_seconds = seconds_since(t1);
        break;
    }
    }

    EvalReport report = evaluate(true_labels, predicted, ds.num_classes());
    report.fit_seconds = fit_seconds;
    report.predict_seconds = predict_seconds;
    return report;
}

CvSummary run_cv(const Dataset& ds, const ExperimentConfig& cfg) {
    if (cfg.repeats < 1) throw ConfigError("run_cv: repeats must be >= 1");
    CvSummary summary;
    for (int r = 0; r < cfg.repeats; ++r) {
        const auto splits = stratified_kfold(ds, cfg.folds, mix_seed(cfg.seed, 1000 + r));
        for (int f = 0; f < cfg.folds; ++f) {
            const std::uint64_t split_seed =
                mix_seed(mix_seed(cfg.seed, static_cast<std::uint64_t>(r)),
                         static_cast<std::uint64_t>(f));
            FoldOutcome outcome;
            outcome.repeat = r;
            outcome.fold = f;
            outcome.report =
                fit_eval_split(ds, splits[f].first, splits[f].second, cfg, split_seed);
            summary.folds.push_back(std::move(outcome));
        }
    }

    double sum = 0.0, sum_sq = 0.0;
    for (const FoldOutcome& o : summary.folds) {
        sum += o.report.am;
        sum_sq += o.report.am * o.report.am;
        summary.fit_seconds_mean += o.report.fit_seconds;
        summary.predict_seconds_mean += o.report.predict_seconds;
    }
    const double count = static_cast<double>(summary.folds.size());
    summary.am_mean = sum / count;
    summary.fit_seconds_mean /= count;
    summary.predict_seconds_mean /= count;
    const double var = std::max(0.0, sum_sq / count - summary.am_mean * summary.am_mean);
    summary.am_sd = std::sqrt(var);
    return summary;
}

nlohmann::json CvSummary::to_json() const {
    nlohmann::json j;
    j["am_mean"] = am_mean;
    j["am_sd"] = am_sd;
    j["fit_seconds_mean"] = fit_seconds_mean;
    j["predict_seconds_mean"] = predict_seconds_mean;
    nlohmann::json folds_json = nlohmann::json::array();
    for (const FoldOutcome& o : folds) {
        nlohmann::json fj = o.report.to_json();
        fj["repeat"] = o.repeat;
        fj["fold"] = o.fold;
        folds_json.push_back(std::move(fj));
    }
    j["folds"] = std::move(folds_json);
    return j;
}

TuneResult tune_k(const Dataset& ds, std::span<const int> rows, Method method,
                  const std::vector<int>& k_grid, int rounds, double s_frac, int folds,
                  std::uint64_t seed, int threads) {
    if (k_grid.empty()) throw ConfigError("tune_k: empty k grid");
    for (std::size_t i = 1; i < k_grid.size(); ++i)
        if (k_grid[i] <= k_grid[i - 1]) throw ConfigError("tune_k: k grid must be increasing");
    const int k_max = k_grid.back();
    const int M = ds.num_classes();

    const Dataset sub = subset(ds, rows);
    const auto splits = stratified_kfold(sub, folds, mix_seed(seed, 7));

    // Pooled per-k confusion counts over all validation folds.
    std::vector<std::vector<std::int64_t>> hits(k_grid.size(),
                                                std::vector<std::int64_t>(M, 0));
    std::vector<std::int64_t> totals(M, 0);

    for (int f = 0; f < folds; ++f) {
        const std::vector<int>& train = splits[f].first;
        const std::vector<int>& val = splits[f].second;
        const Dataset train_ds = subset(sub, train);
        const std::uint64_t fold_seed = mix_seed(seed, 100 + static_cast<std::uint64_t>(f));

        // Every base learner indexes at most train_ds.n() points; one query
        // at k_max per learner yields the votes for every k in the grid.
        std::vector<KnnModel> learners;
        switch (method) {
        case Method::Knn:
            learners.push_back(KnnModel::fit(train_ds, iota_rows(train_ds.n()), k_max));
            break;
        case Method::UndersampleKnn: {
            const SubSample drawn = draw(train_ds, undersample_rule(train_ds), fold_seed);
            learners.push_back(KnnModel::fit(train_ds, drawn.indices, k_max));
            break;
        }
        case Method::UnderbagKnn: {
            const double s = s_frac * static_cast<double>(train_ds.num_classes()) *
                             static_cast<double>(train_ds.minority_count());
            const AcceptanceRule rule = underbag_rule(train_ds, s);
            for (int b = 0; b < rounds; ++b) {
                const SubSample drawn =
                    draw(train_ds, rule, mix_seed(fold_seed, static_cast<std::uint64_t>(b)));
                if (!drawn.indices.empty())
                    learners.push_back(KnnModel::fit(train_ds, drawn.indices, k_max));
            }
            if (learners.empty()) throw DataError("tune_k: all rounds drew empty subsamples");
            break;
        }
        }

        // predictions[i][g] = class predicted for val point i at k_grid[g]
        std::vector<std::vector<int>> predictions(val.size(),
                                                  std::vector<int>(k_grid.size(), 0));
        parallel_for(0, static_cast<std::int64_t>(val.size()), threads, [&](std::int64_t i) {
            const auto x = sub.point(val[static_cast<std::size_t>(i)]);
            std::vector<std::vector<int>> ordered_labels;
            ordered_labels.reserve(learners.size());
            for (const KnnModel& learner : learners) {
                const NeighborList nn = learner.neighbors(x, k_max);
                std::vector<int> labels(nn.size());
                for (std::size_t r = 0; r < nn.size(); ++r)
                    labels[r] = train_ds.label(nn.indices[r]);
                ordered_labels.push_back(std::move(labels));
            }
            std::vector<std::int64_t> votes(M, 0);
            for (std::size_t g = 0; g < k_grid.size(); ++g) {
                std::fill(votes.begin(), votes.end(), 0);
                for (const auto& labels : ordered_labels) {
                    const std::size_t take =
                        std::min<std::size_t>(labels.size(), static_cast<std::size_t>(k_grid[g]));
                    for (std::size_t r = 0; r < take; ++r) votes[labels[r] - 1]++;
                }
                int best = 1;
                for (int m = 2; m <= M; ++m)
                    if (votes[m - 1] > votes[best - 1]) best = m;
                predictions[static_cast<std::size_t>(i)][g] = best;
            }
        });

        for (std::size_t i = 0; i < val.size(); ++i) {
            const int truth = sub.label(val[i]);
            totals[truth - 1]++;
            for (std::size_t g = 0; g < k_grid.size(); ++g)
                if (predictions[i][g] == truth) hits[g][truth - 1]++;
        }
    }

    TuneResult result;
    result.am_per_k.resize(k_grid.size());
    for (std::size_t g = 0; g < k_grid.size(); ++g) {
        double am = 0.0;
        for (int m = 0; m < M; ++m)
            am += static_cast<double>(hits[g][m]) / static_cast<double>(totals[m]);
        result.am_per_k[g] = am / M;
    }
    result.best_k = k_grid[0];
    double best_am = result.am_per_k[0];
    for (std::size_t g = 1; g < k_grid.size(); ++g) {
        if (result.am_per_k[g] > best_am) {
            best_am = result.am_per_k[g];
            result.best_k = k_grid[g];
        }
    }
    return result;
}

} // namespace ubknn

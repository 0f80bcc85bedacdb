// Command-line driver: experiment runner (fit-eval), hyper-parameter sweeps,
// construction/search benchmarks, and oracle self-checks.
//
// Exit codes: 0 success, 2 configuration error, 3 data error,
//             4 oracle-check failure.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ubknn/dataset.hpp"
#include "ubknn/ensemble.hpp"
#include "ubknn/errors.hpp"
#include "ubknn/experiment.hpp"
#include "ubknn/generators.hpp"
#include "ubknn/metrics.hpp"
#include "ubknn/oracle.hpp"
#include "ubknn/parallel.hpp"
#include "ubknn/params.hpp"
#include "ubknn/rng.hpp"

using namespace ubknn;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct DataSource {
    std::string csv_path;
    std::string label_column = "label";
    std::string header = "auto";
    std::string synth_spec;

    bool is_synth() const { return !synth_spec.empty(); }
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

// "moons:n_major=20000,n_minor=200,noise=0.2"
// "cube:d=2,n=10000,pi1=0.95,amp=0.04"
Dataset make_synth(const std::string& spec_str, std::uint64_t seed) {
    const auto colon = spec_str.find(':');
    const std::string kind = spec_str.substr(0, colon);
    std::map<std::string, double> kv;
    if (colon != std::string::npos && colon + 1 < spec_str.size()) {
        for (const std::string& item : split(spec_str.substr(colon + 1), ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw ConfigError("bad synth spec item: '" + item + "'");
            try {
                kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
            } catch (const std::exception&) {
                throw ConfigError("bad synth spec value in '" + item + "'");
            }
        }
    }
    auto get = [&kv](const std::string& key, double fallback) {
        auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    };

    if (kind == "moons") {
        TwoMoonsSpec spec;
        spec.n_major = static_cast<std::int64_t>(get("n_major", 20000));
        spec.n_minor = static_cast<std::int64_t>(get("n_minor", 200));
        spec.noise_sd = get("noise", 0.2);
        spec.seed = seed;
        return gen_two_moons(spec);
    }
    if (kind == "cube") {
        CubeSpec spec;
        spec.n = static_cast<std::int64_t>(get("n", 10000));
        spec.truth =
            make_sine_truth(static_cast<int>(get("d", 2)), get("pi1", 0.95), get("amp", 0.04));
        spec.seed = seed;
        return std::move(gen_cube(spec).data);
    }
    throw ConfigError("unknown synth kind: '" + kind + "' (expected moons | cube)");
}

HeaderMode parse_header_mode(const std::string& mode) {
    if (mode == "auto") return HeaderMode::Auto;
    if (mode == "yes") return HeaderMode::Present;
    if (mode == "no") return HeaderMode::Absent;
    throw ConfigError("bad --header value: " + mode + " (expected auto | yes | no)");
}

Dataset load_source(const DataSource& src, std::uint64_t seed, bool defer_scaling) {
    if (src.is_synth()) return make_synth(src.synth_spec, seed);
    PreprocessSpec spec;
    spec.header = parse_header_mode(src.header);
    // when the harness refits min-max on each train fold, loading must not
    // bake in full-data statistics
    spec.scaling = defer_scaling ? Scaling::None : Scaling::MinMax;
    return load_csv(src.csv_path, src.label_column, spec);
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw DataError("cannot write output file: " + out_path);
    out << content;
}

nlohmann::json dataset_summary(const Dataset& ds) {
    nlohmann::json j;
    j["n"] = ds.n();
    j["d"] = ds.dim();
    j["classes"] = ds.num_classes();
    j["class_counts"] = ds.class_counts();
    j["minority_class"] = ds.minority_class();
    j["imbalance_ratio"] = imbalance_ratio(ds);
    return j;
}

void add_data_flags(CLI::App* cmd, DataSource& src) {
    auto* data =
        cmd->add_option("--data", src.csv_path, "CSV file with features and a label column")
            ->envname("UBKNN_DATA");
    auto* synth =
        cmd->add_option("--synth", src.synth_spec,
                        "synthetic source, e.g. moons:n_major=20000,n_minor=200,noise=0.2 "
                        "or cube:d=2,n=10000,pi1=0.95,amp=0.04")
            ->envname("UBKNN_SYNTH");
    data->excludes(synth);
    synth->excludes(data);
    cmd->add_option("--label", src.label_column, "label column name or 0-based index")
        ->envname("UBKNN_LABEL");
    cmd->add_option("--header", src.header, "CSV header handling: auto | yes | no")
        ->envname("UBKNN_HEADER");
    cmd->callback([&src]() {
        if (src.csv_path.empty() && src.synth_spec.empty())
            throw CLI::ValidationError("one of --data or --synth is required");
    });
}

void add_run_flags(CLI::App* cmd, ExperimentConfig& cfg, std::string& method_name_str) {
    cmd->add_option("--method", method_name_str, "knn | undersample-knn | underbag-knn")
        ->envname("UBKNN_METHOD");
    cmd->add_option("--k", cfg.k, "neighbors (0 with --auto-params derives it)")
        ->envname("UBKNN_K");
    cmd->add_option("--rounds", cfg.rounds, "bagging rounds B")->envname("UBKNN_ROUNDS");
    cmd->add_option("--s-frac", cfg.s_frac, "expected subsample size as a fraction of M*n_(1)")
        ->envname("UBKNN_S_FRAC");
    cmd->add_option("--s", cfg.s_abs, "expected subsample size, absolute (overrides --s-frac)")
        ->envname("UBKNN_S");
    cmd->add_flag("--auto-params", cfg.auto_params,
                  "derive k (and s, B for underbag-knn) from the theory formulas")
        ->envname("UBKNN_AUTO_PARAMS");
    cmd->add_option("--alpha", cfg.alpha, "smoothness exponent for --auto-params")
        ->envname("UBKNN_ALPHA");
    cmd->add_option("--folds", cfg.folds, "cross-validation folds")->envname("UBKNN_FOLDS");
    cmd->add_option("--repeats", cfg.repeats, "cross-validation repetitions")
        ->envname("UBKNN_REPEATS");
    cmd->add_option("--seed", cfg.seed, "master seed")->envname("UBKNN_SEED");
    cmd->add_option("--threads", cfg.threads, "worker threads (results are identical)")
        ->envname("UBKNN_THREADS");
}

// ---------------------------------------------------------------------------
// fit-eval
// ---------------------------------------------------------------------------

int cmd_fit_eval(const DataSource& src, ExperimentConfig cfg, const std::string& method_str,
                 const std::string& out_path, const std::string& format) {
    cfg.method = parse_method(method_str);
    cfg.scale_per_fold = !src.is_synth();
    const Dataset ds = load_source(src, cfg.seed, cfg.scale_per_fold);
    const CvSummary summary = run_cv(ds, cfg);

    if (format == "json") {
        nlohmann::json j;
        j["command"] = "fit-eval";
        j["config"] = cfg.to_json();
        j["dataset"] = dataset_summary(ds);
        j["summary"] = summary.to_json();
        write_output(out_path, j.dump(2) + "\n");
    } else if (format == "csv") {
        std::ostringstream out;
        out.precision(12);
        out << "row_type,method,repeat,fold," << EvalReport::csv_header() << "\n";
        for (const FoldOutcome& f : summary.folds)
            out << "fold," << method_name(cfg.method) << ',' << f.repeat << ',' << f.fold << ','
                << f.report.csv_row() << "\n";
        out << "aggregate," << method_name(cfg.method) << ",,," << summary.am_mean << ','
            << summary.am_sd << ",," << summary.fit_seconds_mean << ','
            << summary.predict_seconds_mean << ",\n";
        write_output(out_path, out.str());
    } else {
        throw ConfigError("bad --format: " + format + " (expected json | csv)");
    }

    std::cerr << "fit-eval " << method_name(cfg.method) << ": AM " << summary.am_mean << " (sd "
              << summary.am_sd << "), fit " << summary.fit_seconds_mean << " s, predict "
              << summary.predict_seconds_mean << " s per fold\n";
    return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

std::vector<int> parse_int_grid(const std::string& text) {
    // "1,2,5" or "1:30" (inclusive range)
    std::vector<int> grid;
    try {
        const auto colon = text.find(':');
        if (colon != std::string::npos) {
            const int lo = std::stoi(text.substr(0, colon));
            const int hi = std::stoi(text.substr(colon + 1));
            for (int v = lo; v <= hi; ++v) grid.push_back(v);
        } else {
            for (const std::string& item : split(text, ','))
                if (!item.empty()) grid.push_back(std::stoi(item));
        }
    } catch (const std::exception&) {
        throw ConfigError("bad grid: " + text);
    }
    if (grid.empty()) throw ConfigError("empty grid: " + text);
    return grid;
}

std::vector<double> parse_double_grid(const std::string& text) {
    std::vector<double> grid;
    try {
        for (const std::string& item : split(text, ','))
            if (!item.empty()) grid.push_back(std::stod(item));
    } catch (const std::exception&) {
        throw ConfigError("bad grid: " + text);
    }
    if (grid.empty()) throw ConfigError("empty grid: " + text);
    return grid;
}

int cmd_sweep(const DataSource& src, ExperimentConfig cfg, const std::string& b_grid_str,
              const std::string& k_grid_str, const std::string& a_grid_str,
              const std::string& out_path) {
    cfg.method = Method::UnderbagKnn;
    cfg.scale_per_fold = !src.is_synth();
    const Dataset ds = load_source(src, cfg.seed, cfg.scale_per_fold);
    const std::vector<int> b_grid = parse_int_grid(b_grid_str);
    const std::vector<int> k_grid = parse_int_grid(k_grid_str);
    const std::vector<double> a_grid = parse_double_grid(a_grid_str);

    std::ostringstream out;
    out.precision(12);
    out << "B,k,a,am_mean,am_sd,fit_seconds_mean,predict_seconds_mean\n";
    for (int b : b_grid)
        for (double a : a_grid)
            for (int k : k_grid) {
                ExperimentConfig cell = cfg;
                cell.rounds = b;
                cell.k = k;
                cell.s_frac = a;
                cell.s_abs = 0.0;
                const CvSummary summary = run_cv(ds, cell);
                out << b << ',' << k << ',' << a << ',' << summary.am_mean << ',' << summary.am_sd
                    << ',' << summary.fit_seconds_mean << ',' << summary.predict_seconds_mean
                    << "\n";
                std::cerr << "sweep B=" << b << " k=" << k << " a=" << a << ": AM "
                          << summary.am_mean << "\n";
            }
    write_output(out_path, out.str());
    return 0;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double lx = std::log(xs[i]);
        const double ly = std::log(std::max(ys[i], 1e-9));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int cmd_bench(const DataSource& src, std::uint64_t seed, int threads,
              const std::string& n_grid_str, int bench_queries, double alpha, int reps,
              const std::string& out_path) {
    if (!src.is_synth()) throw ConfigError("bench requires --synth");
    if (reps < 1) throw ConfigError("bench: --reps must be >= 1");

    // keep the class mix of the requested spec, scale counts to each n
    const Dataset probe = make_synth(src.synth_spec, seed);
    const double minority_share =
        static_cast<double>(probe.minority_count()) / static_cast<double>(probe.n());

    struct BenchRow {
        std::int64_t n;
        std::string method;
        int k, B;
        double s, fit_seconds, predict_seconds;
    };
    std::vector<BenchRow> rows;

    for (int n_int : parse_int_grid(n_grid_str)) {
        const std::int64_t n = n_int;
        const auto n_minor = std::max<std::int64_t>(
            4, static_cast<std::int64_t>(std::llround(minority_share * static_cast<double>(n))));
        TwoMoonsSpec moons;
        moons.n_major = n - n_minor;
        moons.n_minor = n_minor;
        moons.seed = mix_seed(seed, static_cast<std::uint64_t>(n));
        const Dataset ds = gen_two_moons(moons);

        TwoMoonsSpec test_spec = moons;
        test_spec.n_major = std::max<std::int64_t>(bench_queries - bench_queries / 10, 1);
        test_spec.n_minor = std::max<std::int64_t>(bench_queries / 10, 1);
        test_spec.seed = mix_seed(seed, 17);
        const Matrix test = gen_two_moons(test_spec).features();

        const SmoothnessSpec spec{alpha, ds.dim()};
        {
            BenchRow row{n,
                         "knn",
                         choose_undersampling_k(ds.n(), spec),
                         1,
                         static_cast<double>(ds.n()),
                         0,
                         0};
            std::vector<int> all(static_cast<std::size_t>(ds.n()));
            std::iota(all.begin(), all.end(), 0);
            std::vector<double> fit_times, predict_times;
            for (int rep = 0; rep < reps; ++rep) {
                const auto t0 = Clock::now();
                const KnnModel model = KnnModel::fit(ds, all, row.k);
                fit_times.push_back(seconds_since(t0));
                const auto t1 = Clock::now();
                std::vector<int> pred(static_cast<std::size_t>(test.rows));
                parallel_for(0, test.rows, threads, [&](std::int64_t i) {
                    pred[static_cast<std::size_t>(i)] = model.classify(test.row(i));
                });
                predict_times.push_back(seconds_since(t1));
            }
            row.fit_seconds = median_of(fit_times);
            row.predict_seconds = median_of(predict_times);
            rows.push_back(row);
        }
        {
            const double s =
                static_cast<double>(ds.num_classes()) * static_cast<double>(ds.minority_count());
            BenchRow row{n,
                         "underbag-knn",
                         choose_undersampling_k(static_cast<std::int64_t>(s), spec),
                         1,
                         s,
                         0,
                         0};
            UnderBagConfig cfg;
            cfg.rounds = row.B;
            cfg.k = row.k;
            cfg.s = row.s;
            cfg.master_seed = mix_seed(seed, 23);
            cfg.threads = threads;
            std::vector<double> fit_times, predict_times;
            for (int rep = 0; rep < reps; ++rep) {
                const auto t0 = Clock::now();
                const UnderBagModel model = UnderBagModel::fit(ds, cfg);
                fit_times.push_back(seconds_since(t0));
                const auto t1 = Clock::now();
                model.predict_batch(test);
                predict_times.push_back(seconds_since(t1));
            }
            row.fit_seconds = median_of(fit_times);
            row.predict_seconds = median_of(predict_times);
            rows.push_back(row);
        }
        std::cerr << "bench n=" << n << ": knn " << rows[rows.size() - 2].fit_seconds << "+"
                  << rows[rows.size() - 2].predict_seconds << " s, underbag "
                  << rows.back().fit_seconds << "+" << rows.back().predict_seconds << " s\n";
    }

    std::ostringstream out;
    out.precision(12);
    out << "n,method,k,B,s,fit_seconds,predict_seconds\n";
    for (const BenchRow& r : rows)
        out << r.n << ',' << r.method << ',' << r.k << ',' << r.B << ',' << r.s << ','
            << r.fit_seconds << ',' << r.predict_seconds << "\n";
    write_output(out_path, out.str());

    for (const char* method : {"knn", "underbag-knn"}) {
        std::vector<double> ns, fits, predicts;
        for (const BenchRow& r : rows)
            if (r.method == method) {
                ns.push_back(static_cast<double>(r.n));
                fits.push_back(r.fit_seconds);
                predicts.push_back(r.predict_seconds);
            }
        if (ns.size() >= 2)
            std::cerr << "slope (log t vs log n) " << method << ": fit " << loglog_slope(ns, fits)
                      << ", predict " << loglog_slope(ns, predicts) << "\n";
    }

    // advisory check of standard-tree build times against c * n log n
    {
        std::vector<double> ns, fits;
        for (const BenchRow& r : rows)
            if (r.method == std::string("knn")) {
                ns.push_back(static_cast<double>(r.n));
                fits.push_back(r.fit_seconds);
            }
        if (ns.size() >= 3) {
            double num = 0, den = 0;
            for (std::size_t i = 0; i < ns.size(); ++i) {
                const double basis = ns[i] * std::log(ns[i]);
                num += fits[i] * basis;
                den += basis * basis;
            }
            const double c = num / den;
            double worst = 0;
            for (std::size_t i = 0; i < ns.size(); ++i) {
                const double fitted = c * ns[i] * std::log(ns[i]);
                worst = std::max(worst, std::abs(fits[i] - fitted) / fitted);
            }
            std::cerr << (worst <= 0.25 ? "build-time c*n*log(n) fit OK"
                                        : "WARN: build-time deviates from c*n*log(n)")
                      << " (max relative residual " << worst << ")\n";
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// oracle-check
// ---------------------------------------------------------------------------

bool report_check(const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
    return ok;
}

int cmd_oracle_check(std::uint64_t seed) {
    bool all_ok = true;
    Rng rng(seed);

    {
        int mismatches = 0, checked = 0;
        for (int inst = 0; inst < 30; ++inst) {
            const std::int64_t n = 2 + static_cast<std::int64_t>(rng.uniform_index(800));
            const int d = 1 + static_cast<int>(rng.uniform_index(8));
            const int k = 1 + static_cast<int>(rng.uniform_index(
                                  static_cast<std::uint64_t>(std::min<std::int64_t>(n, 25))));
            Matrix pts(n, d);
            for (std::int64_t i = 0; i < n; ++i)
                for (int j = 0; j < d; ++j) pts.at(i, j) = rng.uniform();
            const KdTree tree = KdTree::build(Matrix(pts));
            for (int q = 0; q < 10; ++q) {
                std::vector<double> x(d);
                for (double& v : x) v = rng.uniform(-0.2, 1.2);
                const NeighborList got = tree.query(x, k);
                const NeighborList want = oracle::brute_knn(pts, x, k);
                ++checked;
                if (got.indices != want.indices || got.distances != want.distances) ++mismatches;
            }
        }
        all_ok &= report_check("kdtree-exactness", mismatches == 0,
                               std::to_string(checked) + " queries, " +
                                   std::to_string(mismatches) + " mismatches");
    }

    {
        double worst = 0.0;
        for (double p : {0.25, 0.5, 0.8}) {
            std::vector<double> probs(120, p);
            for (int j : {1, 3, 10}) {
                oracle::GPParams params{probs, j};
                for (int i = 1; i <= 120; ++i) {
                    double coeff = 1.0;
                    for (int t = 0; t < j - 1; ++t) coeff = coeff * (i - 1 - t) / (t + 1);
                    const double closed =
                        i < j ? 0.0 : coeff * std::pow(p, j) * std::pow(1.0 - p, i - j);
                    worst = std::max(worst, std::abs(oracle::gp_pmf(params, i) - closed));
                }
            }
        }
        all_ok &= report_check("gp-closed-form", worst <= 1e-12,
                               "max |dp - closed| = " + std::to_string(worst));
    }

    {
        bool ok = true;
        for (int rep = 0; rep < 30; ++rep) {
            const int n = 20 + static_cast<int>(rng.uniform_index(180));
            const int j = 1 + static_cast<int>(rng.uniform_index(15));
            std::vector<double> probs(n);
            double sum = 0;
            for (double& p : probs) {
                p = rng.uniform(0.05, 1.0);
                sum += p;
            }
            if (sum < j) continue;
            const double bound = std::exp(-(sum - j) * (sum - j) / (2.0 * n));
            if (oracle::gp_tail({probs, j}) > bound + 1e-12) ok = false;
        }
        all_ok &= report_check("gp-tail-bound", ok, "30 random parameter draws");
    }

    {
        bool ok = true;
        for (int rep = 0; rep < 20; ++rep) {
            const std::int64_t c1 = 5 + static_cast<std::int64_t>(rng.uniform_index(40));
            const std::int64_t c2 = 5 + static_cast<std::int64_t>(rng.uniform_index(80));
            Matrix pts(c1 + c2, 2);
            std::vector<int> labels;
            for (std::int64_t i = 0; i < pts.rows; ++i) {
                pts.at(i, 0) = rng.uniform();
                pts.at(i, 1) = rng.uniform();
                labels.push_back(i < c1 ? 1 : 2);
            }
            const Dataset ds = Dataset::from_parts(std::move(pts), std::move(labels));
            const int k = 1 + static_cast<int>(rng.uniform_index(6));
            const double s_max = 2.0 * static_cast<double>(ds.minority_count());
            if (s_max < k) continue;
            const double s = k + rng.uniform() * (s_max - k);
            const AcceptanceRule rule = underbag_rule(ds, s);
            std::vector<double> x{rng.uniform(), rng.uniform()};
            const auto bw = oracle::exact_bagged_weights(ds, rule, x, k);
            const double total = std::accumulate(bw.vbar.begin(), bw.vbar.end(), 0.0);
            const double n = static_cast<double>(ds.n());
            if (1.0 - total > std::exp(-(s - k) * (s - k) / (2.0 * n)) + 1e-12) ok = false;
            const double max_bound = s / (k * 2.0 * static_cast<double>(ds.minority_count()));
            for (double v : bw.vbar)
                if (v > max_bound + 1e-12) ok = false;
        }
        all_ok &= report_check("gp-weight-bounds", ok, "20 random instances");
    }

    {
        double worst = 0.0;
        for (int rep = 0; rep < 200; ++rep) {
            const int M = 2 + static_cast<int>(rng.uniform_index(4));
            const int n = M + static_cast<int>(rng.uniform_index(300));
            std::vector<int> truth(n), pred(n);
            for (int m = 0; m < M; ++m) truth[m] = m + 1;
            for (int i = M; i < n; ++i)
                truth[i] = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(M)));
            for (int i = 0; i < n; ++i)
                pred[i] = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(M)));
            const EvalReport r = evaluate(truth, pred, M);
            worst = std::max(worst, std::abs(r.am - (1.0 - r.balanced_risk)));
        }
        all_ok &= report_check("balanced-risk-identity", worst <= 1e-12,
                               "max |AM - (1 - risk)| = " + std::to_string(worst));
    }

    {
        bool ok = true;
        for (int rep = 0; rep < 10; ++rep) {
            Matrix pts(60, 2);
            std::vector<int> labels;
            for (std::int64_t i = 0; i < 60; ++i) {
                pts.at(i, 0) = rng.uniform();
                pts.at(i, 1) = rng.uniform();
                labels.push_back(i < 20 ? 1 : 2);
            }
            const Dataset ds = Dataset::from_parts(std::move(pts), std::move(labels));
            UnderBagConfig cfg;
            cfg.rounds = 2;
            cfg.k = 1 + static_cast<int>(rng.uniform_index(5));
            cfg.s = 10 + rng.uniform() * 20;
            cfg.master_seed = rng.next_u64();
            const UnderBagModel model = UnderBagModel::fit(ds, cfg);
            std::vector<double> x{rng.uniform(), rng.uniform()};
            for (int b = 0; b < cfg.rounds; ++b) {
                const Posterior inside = model.round_posterior(b, x);
                const NeighborList order =
                    oracle::brute_knn(ds.features(), x, static_cast<int>(ds.n()));
                std::vector<bool> accepted(static_cast<std::size_t>(ds.n()), false);
                for (int idx : model.round_sample(b).indices) accepted[idx] = true;
                Posterior weighted(2, 0.0);
                int taken = 0;
                for (int idx : order.indices) {
                    if (!accepted[idx]) continue;
                    weighted[ds.label(idx) - 1] += 1.0 / cfg.k;
                    if (++taken == cfg.k) break;
                }
                if (inside != weighted) ok = false;
            }
        }
        all_ok &= report_check("weighted-form-equivalence", ok, "20 random rounds, exact");
    }

    std::cout << (all_ok ? "oracle-check: all checks passed\n"
                         : "oracle-check: FAILURES detected\n");
    return all_ok ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"under-bagging k-NN for imbalanced classification"};
    app.require_subcommand(1);

    DataSource src;
    ExperimentConfig cfg;
    cfg.threads = hardware_threads();
    std::string method_str = "underbag-knn";
    std::string out_path, format = "json";

    auto* fit_eval = app.add_subcommand("fit-eval", "cross-validate a method and report AM");
    add_data_flags(fit_eval, src);
    add_run_flags(fit_eval, cfg, method_str);
    fit_eval->add_option("--out", out_path, "output path (default stdout)")->envname("UBKNN_OUT");
    fit_eval->add_option("--format", format, "json | csv")->envname("UBKNN_FORMAT");

    std::string b_grid = "1,2,5,10,20,50", k_grid = "1:30", a_grid = "1.0";
    auto* sweep = app.add_subcommand("sweep", "grid over B, k, and a = s/(M*n_(1))");
    add_data_flags(sweep, src);
    add_run_flags(sweep, cfg, method_str);
    sweep->add_option("--b-grid", b_grid, "comma list or lo:hi");
    sweep->add_option("--k-grid", k_grid, "comma list or lo:hi");
    sweep->add_option("--a-grid", a_grid, "comma list of fractions in (0,1]");
    sweep->add_option("--out", out_path, "output CSV path (default stdout)")->envname("UBKNN_OUT");

    std::string n_grid = "4096,8192,16384,32768,65536,131072";
    int bench_queries = 1000;
    auto* bench = app.add_subcommand(
        "bench", "build/query timing of standard k-NN vs under-bagging over an n grid");
    add_data_flags(bench, src);
    bench->add_option("--n-grid", n_grid, "comma list or lo:hi of training sizes");
    bench->add_option("--queries", bench_queries, "number of timed query points");
    int bench_reps = 5;
    bench->add_option("--reps", bench_reps, "timing repetitions per cell (median reported)");
    bench->add_option("--alpha", cfg.alpha, "smoothness exponent for the theory k");
    bench->add_option("--seed", cfg.seed, "master seed")->envname("UBKNN_SEED");
    bench->add_option("--threads", cfg.threads, "worker threads")->envname("UBKNN_THREADS");
    bench->add_option("--out", out_path, "output CSV path (default stdout)")->envname("UBKNN_OUT");

    std::uint64_t check_seed = 20240901;
    auto* oracle_check =
        app.add_subcommand("oracle-check", "run oracle-vs-implementation self checks");
    oracle_check->add_option("--seed", check_seed, "seed for the randomized checks")
        ->envname("UBKNN_SEED");

    try {
        app.parse(argc, argv);
        if (fit_eval->parsed()) return cmd_fit_eval(src, cfg, method_str, out_path, format);
        if (sweep->parsed()) return cmd_sweep(src, cfg, b_grid, k_grid, a_grid, out_path);
        if (bench->parsed())
            return cmd_bench(src, cfg.seed, cfg.threads, n_grid, bench_queries, cfg.alpha,
                             bench_reps, out_path);
        if (oracle_check->parsed()) return cmd_oracle_check(check_seed);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    }
}

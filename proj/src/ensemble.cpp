#include "ubknn/ensemble.hpp"

#include <cstring>
#include <fstream>

#include "ubknn/errors.hpp"
#include "ubknn/parallel.hpp"
#include "ubknn/rng.hpp"

namespace ubknn {

void UnderBagConfig::validate(const Dataset& ds) const {
    if (rounds < 1) throw ConfigError("underbag: rounds must be >= 1");
    if (k < 1) throw ConfigError("underbag: k must be >= 1");
    const double s_max =
        static_cast<double>(ds.num_classes()) * static_cast<double>(ds.minority_count());
    if (s < 1.0 || s > s_max)
        throw ConfigError("underbag: s=" + std::to_string(s) + " outside [1, M*n_(1)=" +
                          std::to_string(s_max) + "]");
}

UnderBagModel UnderBagModel::assemble(const Dataset& ds, const UnderBagConfig& cfg,
                                      std::vector<SubSample> samples) {
    UnderBagModel model;
    model.config_ = cfg;
    model.num_classes_ = ds.num_classes();
    model.dim_ = ds.dim();
    model.data_fingerprint_ = ds.fingerprint();
    model.rounds_.resize(samples.size());
    for (std::size_t b = 0; b < samples.size(); ++b)
        model.rounds_[b].sample = std::move(samples[b]);

    // Per-round trees are independent; build them in parallel and keep the
    // round order for all later reductions.
    parallel_for(0, static_cast<std::int64_t>(model.rounds_.size()), cfg.threads,
                 [&](std::int64_t b) {
                     Round& round = model.rounds_[b];
                     if (!round.sample.indices.empty())
                         round.model = KnnModel::fit(ds, round.sample.indices, cfg.k);
                 });

    bool any = false;
    for (const Round& r : model.rounds_)
        if (r.model.has_value()) any = true;
    if (!any) throw DataError("underbag: all rounds drew empty subsamples");
    return model;
}

UnderBagModel UnderBagModel::fit(const Dataset& ds, const UnderBagConfig& cfg) {
    cfg.validate(ds);
    const AcceptanceRule rule = underbag_rule(ds, cfg.s);
    std::vector<SubSample> samples(static_cast<std::size_t>(cfg.rounds));
    for (int b = 0; b < cfg.rounds; ++b)
        samples[b] = draw(ds, rule, mix_seed(cfg.master_seed, static_cast<std::uint64_t>(b)));
    return assemble(ds, cfg, std::move(samples));
}

Posterior UnderBagModel::round_posterior(int b, std::span<const double> x) const {
    const Round& round = rounds_[b];
    if (!round.model.has_value()) return Posterior(static_cast<std::size_t>(num_classes_), 0.0);
    return round.model->posterior(x);
}

Posterior UnderBagModel::posterior(std::span<const double> x) const {
    Posterior acc(static_cast<std::size_t>(num_classes_), 0.0);
    for (const Round& round : rounds_) {
        if (!round.model.has_value()) continue;
        const Posterior p = round.model->posterior(x);
        for (int m = 0; m < num_classes_; ++m) acc[m] += p[m];
    }
    const double inv_b = 1.0 / static_cast<double>(rounds_.size());
    for (double& v : acc) v *= inv_b;
    return acc;
}

int UnderBagModel::classify(std::span<const double> x) const { return argmax_class(posterior(x)); }

std::vector<int> UnderBagModel::predict_batch(const Matrix& X,
                                              std::vector<Posterior>* posteriors) const {
    if (X.cols != dim_) throw ConfigError("underbag: query dimension mismatch");
    std::vector<int> labels(static_cast<std::size_t>(X.rows));
    if (posteriors) posteriors->assign(static_cast<std::size_t>(X.rows), {});
    parallel_for(0, X.rows, config_.threads, [&](std::int64_t i) {
        Posterior p = posterior(X.row(i));
        labels[i] = argmax_class(p);
        if (posteriors) (*posteriors)[i] = std::move(p);
    });
    return labels;
}

namespace {

constexpr char kMagic[4] = {'U', 'B', 'K', 'N'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T take(std::ifstream& in) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw DataError("underbag: truncated model file");
    return v;
}

} // namespace

void UnderBagModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("underbag: cannot write " + path);
    out.write(kMagic, sizeof kMagic);
    put(out, kVersion);
    put(out, data_fingerprint_);
    put(out, static_cast<std::int32_t>(num_classes_));
    put(out, static_cast<std::int32_t>(dim_));
    put(out, static_cast<std::int32_t>(config_.rounds));
    put(out, static_cast<std::int32_t>(config_.k));
    put(out, config_.s);
    put(out, config_.master_seed);
    for (const Round& round : rounds_) {
        put(out, round.sample.round_seed);
        put(out, static_cast<std::int64_t>(round.sample.indices.size()));
        out.write(reinterpret_cast<const char*>(round.sample.indices.data()),
                  static_cast<std::streamsize>(round.sample.indices.size() * sizeof(int)));
    }
    if (!out) throw DataError("underbag: write failed for " + path);
}

UnderBagModel UnderBagModel::load(const std::string& path, const Dataset& ds) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("underbag: cannot open " + path);
    char magic[4];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw DataError("underbag: not a model file: " + path);
    const auto version = take<std::uint32_t>(in);
    if (version != kVersion)
        throw DataError("underbag: unsupported model version " + std::to_string(version));
    const auto fingerprint = take<std::uint64_t>(in);
    if (fingerprint != ds.fingerprint())
        throw DataError("underbag: model was trained on different data (fingerprint mismatch)");

    UnderBagConfig cfg;
    const auto m = take<std::int32_t>(in);
    const auto d = take<std::int32_t>(in);
    cfg.rounds = take<std::int32_t>(in);
    cfg.k = take<std::int32_t>(in);
    cfg.s = take<double>(in);
    cfg.master_seed = take<std::uint64_t>(in);
    if (m != ds.num_classes() || d != ds.dim())
        throw DataError("underbag: model shape does not match dataset");

    std::vector<SubSample> samples(static_cast<std::size_t>(cfg.rounds));
    for (int b = 0; b < cfg.rounds; ++b) {
        samples[b].round_seed = take<std::uint64_t>(in);
        const auto count = take<std::int64_t>(in);
        if (count < 0 || count > ds.n()) throw DataError("underbag: corrupt model file");
        samples[b].indices.resize(static_cast<std::size_t>(count));
        in.read(reinterpret_cast<char*>(samples[b].indices.data()),
                static_cast<std::streamsize>(samples[b].indices.size() * sizeof(int)));
        if (!in) throw DataError("underbag: truncated model file");
        for (int idx : samples[b].indices)
            if (idx < 0 || idx >= ds.n()) throw DataError("underbag: corrupt model file");
    }
    return assemble(ds, cfg, std::move(samples));
}

} // namespace ubknn

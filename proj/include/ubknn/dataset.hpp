#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ubknn/matrix.hpp"

namespace ubknn {

enum class NumericImpute { Mean };
enum class CategoricalImpute { Mode };
enum class CategoricalEncoding { OneHot };
enum class Scaling { MinMax, None };
enum class HeaderMode { Auto, Present, Absent };

/// Preprocessing policy applied by load_csv. Imputation and encoding have a
/// single supported strategy each; scaling can be deferred (Scaling::None)
/// so that cross-validation harnesses can fit min-max statistics on the
/// train fold only.
struct PreprocessSpec {
    NumericImpute numeric_impute = NumericImpute::Mean;
    CategoricalImpute categorical_impute = CategoricalImpute::Mode;
    CategoricalEncoding categorical_encoding = CategoricalEncoding::OneHot;
    Scaling scaling = Scaling::MinMax;
    HeaderMode header = HeaderMode::Auto;
};

/// Immutable labeled tabular data. Labels are dense class ids in {1..M}.
class Dataset {
public:
    Dataset() = default;

    /// Validates shapes, label range, and computes per-class counts.
    /// `label_names[m-1]` is the original name of class m (generated names
    /// when constructed from raw parts).
    static Dataset from_parts(Matrix features, std::vector<int> labels,
                              std::vector<std::string> label_names = {});

    std::int64_t n() const { return features_.rows; }
    int dim() const { return features_.cols; }
    int num_classes() const { return static_cast<int>(class_counts_.size()); }

    const Matrix& features() const { return features_; }
    std::span<const double> point(std::int64_t i) const { return features_.row(i); }
    const std::vector<int>& labels() const { return labels_; }
    int label(std::int64_t i) const { return labels_[static_cast<std::size_t>(i)]; }

    /// class_counts()[m-1] == #{i : label(i) == m}
    const std::vector<std::int64_t>& class_counts() const { return class_counts_; }
    std::int64_t class_count(int m) const { return class_counts_[m - 1]; }

    /// Smallest class count n_(1) and the class id attaining it
    /// (smallest id on ties).
    std::int64_t minority_count() const { return minority_count_; }
    int minority_class() const { return minority_class_; }

    const std::vector<std::string>& label_names() const { return label_names_; }

    /// FNV-1a over features and labels; used to tie serialized models to the
    /// exact training data.
    std::uint64_t fingerprint() const;

private:
    Matrix features_;
    std::vector<int> labels_;
    std::vector<std::int64_t> class_counts_;
    std::vector<std::string> label_names_;
    std::int64_t minority_count_ = 0;
    int minority_class_ = 0;
};

/// rho = M * n_(1) / n, in (0,1]; 1 iff all classes have equal counts.
double imbalance_ratio(const Dataset& ds);

/// Loads a comma-separated file, re-indexes labels densely in order of first
/// appearance, and applies the preprocessing policy (mean imputation for
/// numeric columns, mode imputation + one-hot for categorical columns,
/// optional min-max scaling to [0,1]).
///
/// `label_column` is a header name, or a 0-based column index when it parses
/// as an integer (or when the file has no header).
Dataset load_csv(const std::string& path, const std::string& label_column,
                 const PreprocessSpec& spec = {});

/// Writes features plus a final label column (original label names) so that
/// generated datasets round-trip through load_csv.
void write_csv(const Dataset& ds, const std::string& path);

/// Deterministic stratified k-fold split. Every fold's per-class count is
/// within one sample of class_count/folds. Returns (train, test) index
/// pairs, indices ascending.
std::vector<std::pair<std::vector<int>, std::vector<int>>>
stratified_kfold(const Dataset& ds, int folds, std::uint64_t seed);

/// Per-feature min-max statistics fit on a row subset and applied elsewhere.
/// Constant features map to 0.
struct MinMaxScaler {
    std::vector<double> lo, hi;

    static MinMaxScaler fit(const Matrix& m, std::span<const int> rows);
    void apply(Matrix& m) const;
    Matrix transform(const Matrix& m, std::span<const int> rows) const;
};

} // namespace ubknn

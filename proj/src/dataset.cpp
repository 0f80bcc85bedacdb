#include "ubknn/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include "ubknn/errors.hpp"
#include "ubknn/rng.hpp"

namespace ubknn {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool is_missing(const std::string& cell) {
    static const char* tokens[] = {"", "?", "NA", "N/A", "na", "null", "NULL", "nan", "NaN"};
    for (const char* t : tokens)
        if (cell == t) return true;
    return false;
}

bool parse_double(const std::string& cell, double& out) {
    if (cell.empty()) return false;
    char* end = nullptr;
    out = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size()) return false;
    return std::isfinite(out);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    cells.push_back(trim(cur));
    return cells;
}

} // namespace

Dataset Dataset::from_parts(Matrix features, std::vector<int> labels,
                            std::vector<std::string> label_names) {
    if (features.rows == 0) throw DataError("dataset: no rows");
    if (static_cast<std::int64_t>(labels.size()) != features.rows)
        throw DataError("dataset: label count does not match row count");

    int m_max = 0;
    for (int y : labels) {
        if (y < 1) throw DataError("dataset: label below 1");
        m_max = std::max(m_max, y);
    }
    std::vector<std::int64_t> counts(static_cast<std::size_t>(m_max), 0);
    for (int y : labels) counts[y - 1]++;
    for (int m = 0; m < m_max; ++m)
        if (counts[m] == 0)
            throw DataError("dataset: class " + std::to_string(m + 1) + " has no samples");

    Dataset ds;
    ds.features_ = std::move(features);
    ds.labels_ = std::move(labels);
    ds.class_counts_ = std::move(counts);
    if (label_names.empty()) {
        for (int m = 1; m <= m_max; ++m) label_names.push_back(std::to_string(m));
    }
    if (static_cast<int>(label_names.size()) != m_max)
        throw DataError("dataset: label_names size does not match class count");
    ds.label_names_ = std::move(label_names);

    ds.minority_count_ = ds.class_counts_[0];
    ds.minority_class_ = 1;
    for (int m = 2; m <= m_max; ++m) {
        if (ds.class_counts_[m - 1] < ds.minority_count_) {
            ds.minority_count_ = ds.class_counts_[m - 1];
            ds.minority_class_ = m;
        }
    }
    return ds;
}

std::uint64_t Dataset::fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto absorb = [&h](const void* p, std::size_t bytes) {
        const unsigned char* c = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < bytes; ++i) {
            h ^= c[i];
            h *= 0x100000001b3ULL;
        }
    };
    std::int64_t r = features_.rows;
    std::int64_t c = features_.cols;
    absorb(&r, sizeof r);
    absorb(&c, sizeof c);
    absorb(features_.data.data(), features_.data.size() * sizeof(double));
    absorb(labels_.data(), labels_.size() * sizeof(int));
    return h;
}

double imbalance_ratio(const Dataset& ds) {
    return static_cast<double>(ds.num_classes()) * static_cast<double>(ds.minority_count()) /
           static_cast<double>(ds.n());
}

Dataset load_csv(const std::string& path, const std::string& label_column,
                 const PreprocessSpec& spec) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        lines.push_back(line);
    }
    if (lines.empty()) throw DataError("empty file: " + path);

    std::vector<std::vector<std::string>> rows;
    rows.reserve(lines.size());
    for (const auto& l : lines) rows.push_back(split_line(l));
    const std::size_t width = rows[0].size();
    if (width < 2) throw DataError("need at least one feature column and one label column");
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != width)
            throw DataError("unparseable row at line " + std::to_string(r + 1) + ": expected " +
                            std::to_string(width) + " fields, got " + std::to_string(rows[r].size()));
    }

    // Label column: header name, or 0-based index when numeric.
    bool label_is_index = !label_column.empty() &&
                          label_column.find_first_not_of("0123456789") == std::string::npos;
    int label_idx = -1;

    // Header detection: a column whose first cell is non-numeric while a later
    // cell is numeric indicates a header row. A by-name label column requires
    // a header.
    bool has_header = false;
    switch (spec.header) {
    case HeaderMode::Present: has_header = true; break;
    case HeaderMode::Absent: has_header = false; break;
    case HeaderMode::Auto: {
        if (!label_is_index) {
            has_header = true;
        } else if (rows.size() > 1) {
            for (std::size_t c = 0; c < width && !has_header; ++c) {
                double v;
                if (!parse_double(rows[0][c], v) && !is_missing(rows[0][c])) {
                    for (std::size_t r = 1; r < rows.size(); ++r) {
                        if (parse_double(rows[r][c], v)) {
                            has_header = true;
                            break;
                        }
                    }
                }
            }
        }
        break;
    }
    }

    if (label_is_index) {
        label_idx = std::stoi(label_column);
        if (label_idx < 0 || label_idx >= static_cast<int>(width))
            throw DataError("label column index out of range: " + label_column);
    } else {
        if (!has_header) throw DataError("label column given by name but file has no header");
        for (std::size_t c = 0; c < width; ++c)
            if (rows[0][c] == label_column) label_idx = static_cast<int>(c);
        if (label_idx < 0) throw DataError("label column not found: " + label_column);
    }

    const std::size_t first_data = has_header ? 1 : 0;
    const std::int64_t n = static_cast<std::int64_t>(rows.size() - first_data);
    if (n < 1) throw DataError("no data rows in " + path);

    // Labels densified in order of first appearance.
    std::vector<int> labels;
    std::vector<std::string> label_names;
    std::unordered_map<std::string, int> label_ids;
    labels.reserve(n);
    for (std::int64_t r = 0; r < n; ++r) {
        const std::string& cell = rows[first_data + r][label_idx];
        auto it = label_ids.find(cell);
        if (it == label_ids.end()) {
            int id = static_cast<int>(label_names.size()) + 1;
            label_ids.emplace(cell, id);
            label_names.push_back(cell);
            labels.push_back(id);
        } else {
            labels.push_back(it->second);
        }
    }
    if (label_names.size() < 2) throw DataError("single-class data: need at least 2 distinct labels");

    // Column typing from the first non-missing cell; a later non-missing cell
    // that contradicts a numeric column is an error (naming the line).
    struct Column {
        bool numeric = true;
        bool typed = false;
        std::vector<double> values;      // numeric path; NaN = missing
        std::vector<std::string> raw;    // categorical path
    };
    std::vector<Column> cols;
    std::vector<int> feature_cols;
    for (std::size_t c = 0; c < width; ++c)
        if (static_cast<int>(c) != label_idx) feature_cols.push_back(static_cast<int>(c));

    cols.resize(feature_cols.size());
    for (std::size_t fc = 0; fc < feature_cols.size(); ++fc) {
        Column& col = cols[fc];
        col.values.assign(n, std::numeric_limits<double>::quiet_NaN());
        col.raw.assign(n, "");
        for (std::int64_t r = 0; r < n; ++r) {
            const std::string& cell = rows[first_data + r][feature_cols[fc]];
            col.raw[r] = cell;
            if (is_missing(cell)) continue;
            double v;
            bool ok = parse_double(cell, v);
            if (!col.typed) {
                col.typed = true;
                col.numeric = ok;
            }
            if (col.numeric) {
                if (!ok)
                    throw DataError("non-numeric value '" + cell + "' in numeric column " +
                                    std::to_string(feature_cols[fc]) + " at line " +
                                    std::to_string(first_data + r + 1));
                col.values[r] = v;
            }
        }
        if (!col.typed) throw DataError("column " + std::to_string(feature_cols[fc]) + " is entirely missing");
    }

    // Assemble output columns: numeric as-is (mean imputed), categorical
    // one-hot in order of first appearance (mode imputed).
    std::vector<std::vector<double>> out_cols;
    for (auto& col : cols) {
        if (col.numeric) {
            double sum = 0.0;
            std::int64_t cnt = 0;
            for (double v : col.values)
                if (!std::isnan(v)) {
                    sum += v;
                    ++cnt;
                }
            double mean = sum / static_cast<double>(cnt);
            std::vector<double> vals(n);
            for (std::int64_t r = 0; r < n; ++r)
                vals[r] = std::isnan(col.values[r]) ? mean : col.values[r];
            out_cols.push_back(std::move(vals));
        } else {
            // Mode over non-missing cells; ties to the lexicographically
            // smallest value for determinism.
            std::map<std::string, std::int64_t> freq;
            for (std::int64_t r = 0; r < n; ++r)
                if (!is_missing(col.raw[r])) freq[col.raw[r]]++;
            std::string mode;
            std::int64_t best = -1;
            for (const auto& [v, c] : freq)
                if (c > best) {
                    best = c;
                    mode = v;
                }
            std::vector<std::string> categories;
            std::unordered_map<std::string, int> cat_ids;
            std::vector<int> assigned(n);
            for (std::int64_t r = 0; r < n; ++r) {
                const std::string& v = is_missing(col.raw[r]) ? mode : col.raw[r];
                auto it = cat_ids.find(v);
                if (it == cat_ids.end()) {
                    int id = static_cast<int>(categories.size());
                    cat_ids.emplace(v, id);
                    categories.push_back(v);
                    assigned[r] = id;
                } else {
                    assigned[r] = it->second;
                }
            }
            for (std::size_t cat = 0; cat < categories.size(); ++cat) {
                std::vector<double> vals(n, 0.0);
                for (std::int64_t r = 0; r < n; ++r)
                    if (assigned[r] == static_cast<int>(cat)) vals[r] = 1.0;
                out_cols.push_back(std::move(vals));
            }
        }
    }

    Matrix features(n, static_cast<int>(out_cols.size()));
    for (std::int64_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < out_cols.size(); ++c)
            features.at(r, static_cast<int>(c)) = out_cols[c][r];

    if (spec.scaling == Scaling::MinMax) {
        std::vector<int> all(n);
        for (std::int64_t i = 0; i < n; ++i) all[i] = static_cast<int>(i);
        MinMaxScaler::fit(features, all).apply(features);
    }

    return Dataset::from_parts(std::move(features), std::move(labels), std::move(label_names));
}

void write_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out.precision(17);
    for (int c = 0; c < ds.dim(); ++c) out << "f" << c << ",";
    out << "label\n";
    for (std::int64_t i = 0; i < ds.n(); ++i) {
        auto row = ds.point(i);
        for (int c = 0; c < ds.dim(); ++c) out << row[c] << ",";
        out << ds.label_names()[ds.label(i) - 1] << "\n";
    }
}

std::vector<std::pair<std::vector<int>, std::vector<int>>>
stratified_kfold(const Dataset& ds, int folds, std::uint64_t seed) {
    if (folds < 2) throw ConfigError("stratified_kfold: folds must be >= 2");
    const int M = ds.num_classes();
    for (int m = 1; m <= M; ++m)
        if (ds.class_count(m) < folds)
            throw ConfigError("stratified_kfold: class " + std::to_string(m) + " has " +
                              std::to_string(ds.class_count(m)) + " samples, fewer than " +
                              std::to_string(folds) + " folds");

    std::vector<std::vector<int>> fold_members(folds);
    for (int m = 1; m <= M; ++m) {
        std::vector<int> idx;
        for (std::int64_t i = 0; i < ds.n(); ++i)
            if (ds.label(i) == m) idx.push_back(static_cast<int>(i));
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(m)));
        for (std::size_t i = idx.size(); i > 1; --i)
            std::swap(idx[i - 1], idx[rng.uniform_index(i)]);
        for (std::size_t i = 0; i < idx.size(); ++i)
            fold_members[i % folds].push_back(idx[i]);
    }

    std::vector<std::pair<std::vector<int>, std::vector<int>>> out(folds);
    for (int f = 0; f < folds; ++f) {
        std::vector<int>& test = out[f].second;
        test = fold_members[f];
        std::sort(test.begin(), test.end());
        std::vector<int>& train = out[f].first;
        train.reserve(ds.n() - test.size());
        std::size_t t = 0;
        for (std::int64_t i = 0; i < ds.n(); ++i) {
            if (t < test.size() && test[t] == i) {
                ++t;
            } else {
                train.push_back(static_cast<int>(i));
            }
        }
    }
    return out;
}

MinMaxScaler MinMaxScaler::fit(const Matrix& m, std::span<const int> rows) {
    MinMaxScaler s;
    s.lo.assign(m.cols, std::numeric_limits<double>::infinity());
    s.hi.assign(m.cols, -std::numeric_limits<double>::infinity());
    for (int r : rows) {
        auto row = m.row(r);
        for (int c = 0; c < m.cols; ++c) {
            s.lo[c] = std::min(s.lo[c], row[c]);
            s.hi[c] = std::max(s.hi[c], row[c]);
        }
    }
    return s;
}

void MinMaxScaler::apply(Matrix& m) const {
    for (int c = 0; c < m.cols; ++c) {
        const double span = hi[c] - lo[c];
        for (std::int64_t r = 0; r < m.rows; ++r) {
            double& v = m.at(r, c);
            v = span > 0.0 ? (v - lo[c]) / span : 0.0;
        }
    }
}

Matrix MinMaxScaler::transform(const Matrix& m, std::span<const int> rows) const {
    Matrix out(static_cast<std::int64_t>(rows.size()), m.cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto src = m.row(rows[i]);
        auto dst = out.row(static_cast<std::int64_t>(i));
        for (int c = 0; c < m.cols; ++c) {
            const double span = hi[c] - lo[c];
            dst[c] = span > 0.0 ? (src[c] - lo[c]) / span : 0.0;
        }
    }
    return out;
}

} // namespace ubknn

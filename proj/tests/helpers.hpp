#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ubknn/dataset.hpp"
#include "ubknn/matrix.hpp"
#include "ubknn/rng.hpp"

namespace test_helpers {

inline ubknn::Matrix make_matrix(const std::vector<std::vector<double>>& rows) {
    ubknn::Matrix m(static_cast<std::int64_t>(rows.size()), static_cast<int>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m.at(static_cast<std::int64_t>(i), static_cast<int>(j)) = rows[i][j];
    return m;
}

inline ubknn::Dataset make_dataset(const std::vector<std::vector<double>>& rows,
                                   const std::vector<int>& labels) {
    return ubknn::Dataset::from_parts(make_matrix(rows), labels);
}

/// Random dataset with the requested per-class counts, features uniform in
/// the unit cube, rows grouped by class.
inline ubknn::Dataset random_dataset(const std::vector<std::int64_t>& counts, int d,
                                     std::uint64_t seed) {
    std::int64_t n = 0;
    for (auto c : counts) n += c;
    ubknn::Matrix m(n, d);
    std::vector<int> labels;
    labels.reserve(static_cast<std::size_t>(n));
    ubknn::Rng rng(seed);
    std::int64_t row = 0;
    for (std::size_t cls = 0; cls < counts.size(); ++cls) {
        for (std::int64_t i = 0; i < counts[cls]; ++i, ++row) {
            for (int j = 0; j < d; ++j) m.at(row, j) = rng.uniform();
            labels.push_back(static_cast<int>(cls) + 1);
        }
    }
    return ubknn::Dataset::from_parts(std::move(m), std::move(labels));
}

inline ubknn::Matrix random_points(std::int64_t n, int d, std::uint64_t seed) {
    ubknn::Matrix m(n, d);
    ubknn::Rng rng(seed);
    for (std::int64_t i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) m.at(i, j) = rng.uniform();
    return m;
}

/// Writes content to a unique temp file; removed on destruction.
class TempFile {
public:
    explicit TempFile(const std::string& content, const std::string& tag = "data") {
        static int counter = 0;
        path_ = (std::filesystem::temp_directory_path() /
                 ("ubknn_test_" + tag + "_" + std::to_string(counter++) + ".csv"))
                    .string();
        std::ofstream out(path_);
        out << content;
    }
    ~TempFile() { std::remove(path_.c_str()); }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

} // namespace test_helpers

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace fsasl {

/// Dataset in feature-major layout: rows are features, columns are samples.
/// Immutable after construction; safe to share across concurrent readers.
struct DataMatrix {
    Eigen::MatrixXd values;                  // d x n
    std::vector<std::string> feature_names;  // size d, unique

    Eigen::Index n_features() const { return values.rows(); }
    Eigen::Index n_samples() const { return values.cols(); }
};

enum class Preprocessing { none, center, zscore };

/// Throws ConfigError unless all entries are finite, d >= 2, n >= 3 and the
/// feature names are d unique strings.
void validate(const DataMatrix& x);

/// center: every feature row gets mean 0. zscore: mean 0 and unit population
/// (1/n) variance per feature; a zero-variance feature is a ConfigError.
DataMatrix preprocess(const DataMatrix& x, Preprocessing kind);

Preprocessing parse_preprocessing(const std::string& name);
std::string to_string(Preprocessing kind);

}  // namespace fsasl

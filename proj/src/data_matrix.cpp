#include "fsasl/data_matrix.hpp"

#include <cmath>
#include <unordered_set>

#include "fsasl/errors.hpp"

namespace fsasl {

void validate(const DataMatrix& x) {
    const Eigen::Index d = x.values.rows();
    const Eigen::Index n = x.values.cols();
    if (d < 2 || n < 3) {
        throw ConfigError("dataset too small: need d >= 2 features and n >= 3 samples, got d=" +
                          std::to_string(d) + ", n=" + std::to_string(n));
    }
    if (!x.values.allFinite()) {
        throw ConfigError("dataset contains NaN or Inf entries");
    }
    if (static_cast<Eigen::Index>(x.feature_names.size()) != d) {
        throw ConfigError("feature_names size " + std::to_string(x.feature_names.size()) +
                          " does not match feature count " + std::to_string(d));
    }
    std::unordered_set<std::string> seen;
    for (const auto& name : x.feature_names) {
        if (!seen.insert(name).second) {
            throw ConfigError("duplicate feature name: " + name);
        }
    }
}

DataMatrix preprocess(const DataMatrix& x, Preprocessing kind) {
    validate(x);
    if (kind == Preprocessing::none) return x;

    DataMatrix out = x;
    const double n = static_cast<double>(x.n_samples());
    for (Eigen::Index i = 0; i < out.values.rows(); ++i) {
        const double mean = out.values.row(i).mean();
        out.values.row(i).array() -= mean;
        if (kind == Preprocessing::zscore) {
            const double var = out.values.row(i).squaredNorm() / n;
            if (var <= 0.0) {
                throw ConfigError("zscore: feature '" + out.feature_names[i] +
                                  "' has zero variance");
            }
            out.values.row(i) /= std::sqrt(var);
        }
    }
    return out;
}

Preprocessing parse_preprocessing(const std::string& name) {
    if (name == "none") return Preprocessing::none;
    if (name == "center") return Preprocessing::center;
    if (name == "zscore") return Preprocessing::zscore;
    throw ConfigError("unknown preprocessing kind: " + name);
}

std::string to_string(Preprocessing kind) {
    switch (kind) {
        case Preprocessing::none: return "none";
        case Preprocessing::center: return "center";
        case Preprocessing::zscore: return "zscore";
    }
    return "none";
}

}  // namespace fsasl

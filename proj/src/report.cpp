#include "fsasl/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "fsasl/errors.hpp"

namespace fsasl {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
    std::error_code ec;
    fs::create_directories(dir, ec);

    const fs::path tmp = dir / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << content;
        if (!out.good()) throw IoError("write failed for " + tmp.string());
    }
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + " -> " + path + ": " + ec.message());
}

std::string ranking_to_json(const FeatureRanking& ranking,
                            const std::vector<std::string>& feature_names) {
    ordered_json j;
    j["order"] = ranking.order;  // 0-based feature indices, best first
    std::vector<double> scores(ranking.scores.data(), ranking.scores.data() + ranking.scores.size());
    j["scores"] = scores;  // scores[f] is the row norm of feature f
    if (!feature_names.empty()) {
        std::vector<std::string> ordered_names;
        ordered_names.reserve(ranking.order.size());
        for (const auto idx : ranking.order) {
            ordered_names.push_back(feature_names[static_cast<size_t>(idx)]);
        }
        j["ranked_names"] = ordered_names;
    }
    return j.dump(2) + "\n";
}

FeatureRanking ranking_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("ranking parse error: ") + e.what());
    }
    FeatureRanking r;
    try {
        for (const auto& v : j.at("order")) r.order.push_back(v.get<Eigen::Index>());
        const auto scores = j.at("scores").get<std::vector<double>>();
        r.scores = Eigen::Map<const Eigen::VectorXd>(scores.data(),
                                                     static_cast<Eigen::Index>(scores.size()));
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("ranking field error: ") + e.what());
    }
    return r;
}

std::string run_report_to_json(const FsaslState& state, const RunManifest& manifest) {
    ordered_json j;
    j["iterations"] = state.iterations;
    j["converged"] = state.converged;
    j["objective_trace"] = state.objective_trace;
    j["iteration_seconds"] = state.iteration_seconds;  // only non-reproducible field
    j["mu"] = state.mu;
    j["gamma_resolved"] = state.gamma_resolved;
    j["gamma_max"] = state.gamma_max_value;
    j["monotonicity_violations"] = state.monotonicity_violations;
    const FeatureRanking ranking = rank_features(state);
    j["ranking"] = ordered_json::parse(ranking_to_json(ranking, {}));
    j["manifest"] = ordered_json::parse(manifest_to_json(manifest));
    return j.dump(2) + "\n";
}

std::string matrix_to_triplet_csv(const Eigen::MatrixXd& m) {
    std::string out = "row,col,value\n";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (m(i, j) != 0.0) {
                out += std::to_string(i) + "," + std::to_string(j) + "," + fmt_double(m(i, j)) +
                       "\n";
            }
        }
    }
    return out;
}

std::string matrix_to_dense_csv(const Eigen::MatrixXd& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ",";
            out += fmt_double(m(i, j));
        }
        out += "\n";
    }
    return out;
}

std::string eval_report_to_json(const EvalReport& rep) {
    ordered_json j;
    ordered_json rows = ordered_json::array();
    for (const auto& r : rep.per_feature_count) {
        rows.push_back({{"m", r.m},
                        {"mean_acc", r.mean_acc},
                        {"std_acc", r.std_acc},
                        {"mean_nmi", r.mean_nmi},
                        {"std_nmi", r.std_nmi}});
    }
    j["per_feature_count"] = rows;
    j["aggregated"] = {{"mean_acc", rep.aggregated_acc}, {"mean_nmi", rep.aggregated_nmi}};
    j["raw_acc"] = rep.raw_acc;
    j["raw_nmi"] = rep.raw_nmi;
    return j.dump(2) + "\n";
}

std::string eval_report_to_csv(const EvalReport& rep) {
    std::string out = "m,mean_acc,std_acc,mean_nmi,std_nmi\n";
    for (const auto& r : rep.per_feature_count) {
        out += std::to_string(r.m) + "," + fmt_double(r.mean_acc) + "," + fmt_double(r.std_acc) +
               "," + fmt_double(r.mean_nmi) + "," + fmt_double(r.std_nmi) + "\n";
    }
    return out;
}

std::string error_to_json(const std::string& kind, const std::string& message) {
    ordered_json j;
    j["kind"] = kind;
    j["message"] = message;
    return j.dump() + "\n";
}

}  // namespace fsasl

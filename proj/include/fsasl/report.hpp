#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fsasl/eval.hpp"
#include "fsasl/manifest.hpp"
#include "fsasl/solver.hpp"

namespace fsasl {

/// Writes content to a temp file in the target directory, then renames it
/// into place, so error paths never leave partial files behind.
void atomic_write(const std::string& path, const std::string& content);

std::string ranking_to_json(const FeatureRanking& ranking,
                            const std::vector<std::string>& feature_names);

std::string run_report_to_json(const FsaslState& state, const RunManifest& manifest);

/// Sparse triplet form, "row,col,value" with exact zeros skipped.
std::string matrix_to_triplet_csv(const Eigen::MatrixXd& m);

std::string matrix_to_dense_csv(const Eigen::MatrixXd& m);

std::string eval_report_to_json(const EvalReport& rep);
std::string eval_report_to_csv(const EvalReport& rep);

/// Ranking as written by cmd_select; order and scores only.
FeatureRanking ranking_from_json(const std::string& text);

std::string error_to_json(const std::string& kind, const std::string& message);

}  // namespace fsasl

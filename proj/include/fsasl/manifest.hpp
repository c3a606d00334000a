#pragma once

#include <string>
#include <vector>

#include "fsasl/data_matrix.hpp"
#include "fsasl/io.hpp"
#include "fsasl/solver.hpp"

namespace fsasl {

struct DatasetSpec {
    std::string path;
    FileFormat format = FileFormat::csv;
    Orientation orientation = Orientation::samples_as_rows;
    bool has_header = false;
    std::string label_column;  // empty = unlabeled
};

// Parameter grid for sweeps; empty axes fall back to the scalar config value.
struct GridSpec {
    std::vector<double> alphas;
    std::vector<double> betas;
    std::vector<double> gamma_fractions;
    std::vector<int> ks;
};

/// Everything a run needs; commands are pure functions of
/// (manifest, dataset bytes, seeds). Serialization round-trips byte-exactly:
/// write -> read -> write is the identity.
struct RunManifest {
    DatasetSpec dataset;
    Preprocessing preprocessing = Preprocessing::zscore;
    FsaslConfig config;
    GridSpec grid;
    std::vector<int> m_grid;
    std::vector<unsigned> seeds;
    std::string output_dir = "out";
};

std::string manifest_to_json(const RunManifest& m);  // canonical form, trailing newline
RunManifest manifest_from_json(const std::string& text);

void save_manifest(const RunManifest& m, const std::string& path);
RunManifest load_manifest(const std::string& path);

}  // namespace fsasl

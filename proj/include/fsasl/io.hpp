#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fsasl/data_matrix.hpp"

namespace fsasl {

enum class FileFormat { csv, libsvm };
enum class Orientation { samples_as_rows, features_as_rows };

struct LoadOptions {
    FileFormat format = FileFormat::csv;
    // csv only; libsvm lines are always one sample each.
    Orientation orientation = Orientation::samples_as_rows;
    bool has_header = false;
    // Label column for csv, given as a header name or a 0-based index in
    // decimal. Empty means unlabeled. libsvm files always carry labels.
    std::optional<std::string> label_column;
};

struct LoadedDataset {
    DataMatrix x;
    // Side channel consumed only by the evaluation module; the solver never
    // sees labels. Class ids are assigned by first appearance.
    std::optional<std::vector<int>> labels;
    std::vector<std::string> label_names;  // original label strings, index = class id
};

LoadedDataset load_dataset(const std::string& path, const LoadOptions& opts);

FileFormat parse_format(const std::string& name);
Orientation parse_orientation(const std::string& name);
std::string to_string(FileFormat f);
std::string to_string(Orientation o);

}  // namespace fsasl

#include "fsasl/io.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "fsasl/errors.hpp"

namespace fsasl {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

double parse_number(const std::string& cell, size_t row, size_t col) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || cell.empty()) {
        throw IoError("non-numeric cell '" + cell + "' at row " + std::to_string(row + 1) +
                      ", column " + std::to_string(col + 1));
    }
    return value;
}

int intern_label(const std::string& raw, std::vector<std::string>& names,
                 std::unordered_map<std::string, int>& index) {
    auto it = index.find(raw);
    if (it != index.end()) return it->second;
    const int id = static_cast<int>(names.size());
    names.push_back(raw);
    index.emplace(raw, id);
    return id;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    // tolerate trailing blank lines only
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    return lines;
}

LoadedDataset load_csv(const std::string& path, const LoadOptions& opts) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) throw IoError("empty file: " + path);

    size_t first_data = 0;
    std::vector<std::string> header;
    if (opts.has_header) {
        header = split_csv_line(lines[0]);
        first_data = 1;
        if (lines.size() == 1) throw IoError("header-only file: " + path);
    }

    std::vector<std::vector<std::string>> rows;
    rows.reserve(lines.size() - first_data);
    for (size_t r = first_data; r < lines.size(); ++r) {
        if (trim(lines[r]).empty()) {
            throw IoError("blank row " + std::to_string(r + 1) + " in " + path);
        }
        rows.push_back(split_csv_line(lines[r]));
        if (rows.back().size() != rows.front().size()) {
            throw IoError("row " + std::to_string(r + 1) + " has " +
                          std::to_string(rows.back().size()) + " cells, expected " +
                          std::to_string(rows.front().size()));
        }
    }
    const size_t n_cols = rows.front().size();
    if (opts.has_header && header.size() != n_cols) {
        throw IoError("header has " + std::to_string(header.size()) + " cells, data rows have " +
                      std::to_string(n_cols));
    }

    // Resolve the label column: header name first, then numeric index.
    std::optional<size_t> label_col;
    if (opts.label_column && !opts.label_column->empty()) {
        const std::string& ref = *opts.label_column;
        if (opts.has_header) {
            auto it = std::find(header.begin(), header.end(), ref);
            if (it != header.end()) label_col = static_cast<size_t>(it - header.begin());
        }
        if (!label_col) {
            char* endp = nullptr;
            errno = 0;
            const long idx = std::strtol(ref.c_str(), &endp, 10);
            if (errno != 0 || endp == ref.c_str() || *endp != '\0') {
                throw ConfigError("label column '" + ref + "' not found");
            }
            if (idx < 0 || static_cast<size_t>(idx) >= n_cols) {
                throw ConfigError("label column index " + ref + " out of range for " +
                                  std::to_string(n_cols) + " columns");
            }
            label_col = static_cast<size_t>(idx);
        }
    }

    LoadedDataset out;
    std::unordered_map<std::string, int> label_index;
    std::vector<int> labels;

    std::vector<size_t> value_cols;
    for (size_t c = 0; c < n_cols; ++c) {
        if (!label_col || c != *label_col) value_cols.push_back(c);
    }
    if (value_cols.empty()) throw IoError("no value columns left after removing label column");

    const bool samples_as_rows = opts.orientation == Orientation::samples_as_rows;
    if (label_col && !samples_as_rows) {
        throw ConfigError("label column requires samples-as-rows orientation");
    }

    const size_t n_rows = rows.size();
    Eigen::MatrixXd table(n_rows, value_cols.size());
    for (size_t r = 0; r < n_rows; ++r) {
        for (size_t j = 0; j < value_cols.size(); ++j) {
            table(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
                parse_number(rows[r][value_cols[j]], r + first_data, value_cols[j]);
        }
        if (label_col) {
            labels.push_back(intern_label(rows[r][*label_col], out.label_names, label_index));
        }
    }

    // Normalize to features x samples.
    out.x.values = samples_as_rows ? Eigen::MatrixXd(table.transpose()) : table;
    const Eigen::Index d = out.x.values.rows();
    for (Eigen::Index i = 0; i < d; ++i) {
        if (opts.has_header) {
            const size_t col = samples_as_rows ? value_cols[static_cast<size_t>(i)] : 0;
            out.x.feature_names.push_back(samples_as_rows ? header[col]
                                                          : "f" + std::to_string(i));
        } else {
            out.x.feature_names.push_back("f" + std::to_string(i));
        }
    }
    if (label_col) out.labels = std::move(labels);
    return out;
}

LoadedDataset load_libsvm(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) throw IoError("empty file: " + path);

    LoadedDataset out;
    std::unordered_map<std::string, int> label_index;
    std::vector<int> labels;
    std::vector<std::vector<std::pair<long, double>>> entries;
    long max_index = 0;

    for (size_t r = 0; r < lines.size(); ++r) {
        std::stringstream ss(lines[r]);
        std::string tok;
        if (!(ss >> tok)) throw IoError("blank row " + std::to_string(r + 1));
        labels.push_back(intern_label(tok, out.label_names, label_index));

        std::vector<std::pair<long, double>> row;
        while (ss >> tok) {
            const size_t colon = tok.find(':');
            if (colon == std::string::npos) {
                throw IoError("malformed token '" + tok + "' at row " + std::to_string(r + 1));
            }
            char* endp = nullptr;
            errno = 0;
            const long idx = std::strtol(tok.substr(0, colon).c_str(), &endp, 10);
            if (errno != 0 || *endp != '\0' || idx < 1) {
                throw IoError("bad feature index in '" + tok + "' at row " + std::to_string(r + 1));
            }
            row.emplace_back(idx, parse_number(tok.substr(colon + 1), r, static_cast<size_t>(idx)));
            max_index = std::max(max_index, idx);
        }
        entries.push_back(std::move(row));
    }

    const Eigen::Index d = static_cast<Eigen::Index>(max_index);
    const Eigen::Index n = static_cast<Eigen::Index>(entries.size());
    if (d == 0) throw IoError("libsvm file has no feature entries: " + path);
    out.x.values = Eigen::MatrixXd::Zero(d, n);  // 1-based indices, missing entries zero
    for (Eigen::Index j = 0; j < n; ++j) {
        for (const auto& [idx, val] : entries[static_cast<size_t>(j)]) {
            out.x.values(static_cast<Eigen::Index>(idx - 1), j) = val;
        }
    }
    for (Eigen::Index i = 0; i < d; ++i) out.x.feature_names.push_back("f" + std::to_string(i));
    out.labels = std::move(labels);
    return out;
}

}  // namespace

LoadedDataset load_dataset(const std::string& path, const LoadOptions& opts) {
    LoadedDataset ds =
        opts.format == FileFormat::csv ? load_csv(path, opts) : load_libsvm(path);
    validate(ds.x);
    if (ds.labels && ds.labels->size() != static_cast<size_t>(ds.x.n_samples())) {
        throw IoError("label count does not match sample count");
    }
    return ds;
}

FileFormat parse_format(const std::string& name) {
    if (name == "csv") return FileFormat::csv;
    if (name == "libsvm") return FileFormat::libsvm;
    throw ConfigError("unknown file format: " + name);
}

Orientation parse_orientation(const std::string& name) {
    if (name == "samples-as-rows") return Orientation::samples_as_rows;
    if (name == "features-as-rows") return Orientation::features_as_rows;
    throw ConfigError("unknown orientation: " + name);
}

std::string to_string(FileFormat f) { return f == FileFormat::csv ? "csv" : "libsvm"; }

std::string to_string(Orientation o) {
    return o == Orientation::samples_as_rows ? "samples-as-rows" : "features-as-rows";
}

}  // namespace fsasl

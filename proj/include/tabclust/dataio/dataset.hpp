#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tabclust/numkit/matrix.hpp"

namespace tabclust::data {

using numkit::DenseMatrix;

struct Dataset {
    std::string name;
    DenseMatrix x;                // N x d
    std::vector<std::size_t> y;   // labels in [0, k)
    std::size_t k = 0;
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;  // index = dense label

    std::size_t n() const noexcept { return x.rows(); }
    std::size_t dim() const noexcept { return x.cols(); }

    // N == y.size(), labels in range, every class present.
    void validate() const;
};

/// Registry entry for a CSV file.
///
/// JSON form: {"name", "path", "label_column", "expected_n", "expected_dim",
/// "expected_classes", "delimiter", "has_header"}. A relative path is
/// resolved against the manifest's own directory. Without a header row the
/// label column is a 0-based index (number or digit string).
struct DatasetManifest {
    std::string name;
    std::filesystem::path path;
    std::string label_column;
    std::optional<std::size_t> expected_n;
    std::optional<std::size_t> expected_dim;
    std::optional<std::size_t> expected_classes;
    char delimiter = ',';
    bool has_header = true;
};

DatasetManifest manifest_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json manifest_to_json(const DatasetManifest& m);
DatasetManifest load_manifest(const std::filesystem::path& path);

struct LoadOptions {
    // Accept a row count different from expected_n (dimension and class
    // count are always enforced).
    bool allow_size_mismatch = false;
};

/// Features are every column except the label column; labels are densified
/// to 0..K-1 in order of first appearance. Empty, "?", "NA" and "NaN" cells
/// are rejected as missing values.
Dataset load_csv(const DatasetManifest& manifest, const LoadOptions& options = {});

// Header f0..f{d-1},label with labels written as integers.
void write_csv(const Dataset& ds, const std::filesystem::path& path);

// Row subset keeping name, K and class names.
Dataset subset(const Dataset& ds, std::span<const std::size_t> rows);

}  // namespace tabclust::data

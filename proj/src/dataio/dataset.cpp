#include "tabclust/dataio/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "tabclust/dataio/csv.hpp"
#include "tabclust/errors.hpp"
#include "tabclust/numkit/format.hpp"

namespace tabclust::data {

using nlohmann::json;

void Dataset::validate() const {
    if (y.size() != x.rows()) {
        throw DataError("dataset '" + name + "': " + std::to_string(y.size()) + " labels for " +
                        std::to_string(x.rows()) + " rows");
    }
    if (k < 1) throw DataError("dataset '" + name + "': class count must be positive");
    std::vector<bool> seen(k, false);
    for (std::size_t label : y) {
        if (label >= k) throw DataError("dataset '" + name + "': label " + std::to_string(label) + " out of range");
        seen[label] = true;
    }
    if (!x.empty() && std::find(seen.begin(), seen.end(), false) != seen.end()) {
        throw DataError("dataset '" + name + "': not every declared class is present");
    }
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

bool is_missing(const std::string& cell) {
    std::string lower;
    for (char c : cell) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return lower.empty() || lower == "?" || lower == "na" || lower == "nan" || lower == "null";
}

std::optional<double> parse_number(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<std::size_t> opt_size(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<std::size_t>();
}

}  // namespace

DatasetManifest manifest_from_json(const json& j, const std::filesystem::path& base_dir) {
    static const std::vector<std::string> known{"name",          "path",         "label_column",
                                                "expected_n",    "expected_dim", "expected_classes",
                                                "delimiter",     "has_header"};
    if (!j.is_object()) throw ConfigError("manifest: expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError("manifest: unknown field '" + key + "'");
        }
    }
    try {
        DatasetManifest m;
        m.name = j.at("name").get<std::string>();
        std::filesystem::path p = j.at("path").get<std::string>();
        m.path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
        const json& label = j.at("label_column");
        m.label_column = label.is_number_integer() ? std::to_string(label.get<long long>()) : label.get<std::string>();
        m.expected_n = opt_size(j, "expected_n");
        m.expected_dim = opt_size(j, "expected_dim");
        m.expected_classes = opt_size(j, "expected_classes");
        if (j.contains("delimiter")) {
            const auto d = j.at("delimiter").get<std::string>();
            if (d == "\\t" || d == "tab") {
                m.delimiter = '\t';
            } else if (d.size() == 1) {
                m.delimiter = d[0];
            } else {
                throw ConfigError("manifest '" + m.name + "': delimiter must be a single character");
            }
        }
        if (j.contains("has_header")) m.has_header = j.at("has_header").get<bool>();
        return m;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("manifest: ") + e.what());
    }
}

json manifest_to_json(const DatasetManifest& m) {
    json j{{"name", m.name},
           {"path", m.path.string()},
           {"label_column", m.label_column},
           {"delimiter", m.delimiter == '\t' ? std::string("\\t") : std::string(1, m.delimiter)},
           {"has_header", m.has_header}};
    j["expected_n"] = m.expected_n ? json(*m.expected_n) : json(nullptr);
    j["expected_dim"] = m.expected_dim ? json(*m.expected_dim) : json(nullptr);
    j["expected_classes"] = m.expected_classes ? json(*m.expected_classes) : json(nullptr);
    return j;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open manifest '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("manifest '" + path.string() + "': " + e.what());
    }
    return manifest_from_json(j, path.parent_path());
}

Dataset load_csv(const DatasetManifest& manifest, const LoadOptions& options) {
    const CsvTable table = read_csv_file(manifest.path.string(), manifest.delimiter, manifest.has_header);
    const std::size_t ncols = manifest.has_header ? table.header.size()
                              : table.rows.empty() ? 0
                                                   : table.rows.front().size();
    std::size_t label_idx = 0;
    if (manifest.has_header) {
        const auto it = std::find_if(table.header.begin(), table.header.end(),
                                     [&](const std::string& h) { return trim(h) == manifest.label_column; });
        if (it == table.header.end()) {
            throw DataError(manifest.path.string() + ": label column '" + manifest.label_column + "' not in header");
        }
        label_idx = static_cast<std::size_t>(it - table.header.begin());
    } else {
        const auto idx = parse_number(manifest.label_column);
        if (!idx || *idx < 0 || *idx != std::floor(*idx) || *idx >= static_cast<double>(ncols)) {
            throw DataError(manifest.path.string() + ": label column index '" + manifest.label_column +
                            "' is not a valid 0-based column index");
        }
        label_idx = static_cast<std::size_t>(*idx);
    }

    Dataset ds;
    ds.name = manifest.name;
    for (std::size_t c = 0; c < ncols; ++c) {
        if (c == label_idx) continue;
        ds.feature_names.push_back(manifest.has_header ? trim(table.header[c]) : "f" + std::to_string(c));
    }
    const std::size_t d = ds.feature_names.size();
    const std::size_t n = table.rows.size();
    ds.x = DenseMatrix(n, d);
    ds.y.resize(n);
    std::map<std::string, std::size_t> classes;
    for (std::size_t r = 0; r < n; ++r) {
        const auto& row = table.rows[r];
        const std::size_t line = table.line_numbers[r];
        std::size_t f = 0;
        for (std::size_t c = 0; c < ncols; ++c) {
            const std::string cell = trim(row[c]);
            const std::string where = "row " + std::to_string(r + 1) + " (line " + std::to_string(line) +
                                      "), column " + std::to_string(c + 1);
            if (c == label_idx) {
                if (is_missing(cell)) throw DataError(manifest.path.string() + ": missing label at " + where);
                auto [it, inserted] = classes.emplace(cell, classes.size());
                if (inserted) ds.class_names.push_back(cell);
                ds.y[r] = it->second;
                continue;
            }
            const std::string& col = ds.feature_names[f];
            if (is_missing(cell)) {
                throw DataError(manifest.path.string() + ": missing value at " + where + " '" + col + "'");
            }
            const auto v = parse_number(cell);
            if (!v) {
                throw DataError(manifest.path.string() + ": non-numeric value '" + cell + "' at " + where + " '" +
                                col + "'");
            }
            ds.x(r, f++) = *v;
        }
    }
    ds.k = classes.size();

    const bool n_bad = manifest.expected_n && *manifest.expected_n != n && !options.allow_size_mismatch;
    const bool d_bad = manifest.expected_dim && *manifest.expected_dim != d;
    const bool k_bad = manifest.expected_classes && *manifest.expected_classes != ds.k;
    if (n_bad || d_bad || k_bad) {
        const auto show = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string("*"); };
        throw DataError("dataset '" + manifest.name + "' does not match its manifest: expected N=" +
                        show(manifest.expected_n) + ", d=" + show(manifest.expected_dim) +
                        ", K=" + show(manifest.expected_classes) + "; found N=" + std::to_string(n) +
                        ", d=" + std::to_string(d) + ", K=" + std::to_string(ds.k));
    }
    if (n == 0 || d == 0) throw DataError("dataset '" + manifest.name + "': no rows or no feature columns");
    if (ds.k < 2) throw DataError("dataset '" + manifest.name + "': needs at least two classes");
    ds.validate();
    return ds;
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
    for (std::size_t c = 0; c < ds.dim(); ++c) out << 'f' << c << ',';
    out << "label\n";
    for (std::size_t r = 0; r < ds.n(); ++r) {
        for (std::size_t c = 0; c < ds.dim(); ++c) out << numkit::format_double(ds.x(r, c)) << ',';
        out << ds.y[r] << '\n';
    }
}

Dataset subset(const Dataset& ds, std::span<const std::size_t> rows) {
    Dataset out;
    out.name = ds.name;
    out.k = ds.k;
    out.feature_names = ds.feature_names;
    out.class_names = ds.class_names;
    out.x = numkit::select_rows(ds.x, rows);
    out.y.reserve(rows.size());
    for (std::size_t r : rows) out.y.push_back(ds.y[r]);
    return out;
}

}  // namespace tabclust::data

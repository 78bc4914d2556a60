#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tabclust/evalkit/ranking.hpp"

namespace tabclust::bench {

struct ResultRow {
    std::string dataset;
    std::string method;
    std::size_t fold = 0;
    double accuracy = 0.0;
    std::optional<double> chosen_gamma;  // "na" in the file
    std::uint64_t seed = 0;
};

// Header: dataset,method,fold,accuracy,chosen_gamma,seed
void write_results_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results_csv(const std::filesystem::path& path);

// Display names used in the tables (GMM, K-means, DEC, ...); unknown ids pass through.
std::string display_name(const std::string& method_id);

// "mean (std)" with each part rounded half-up to one decimal.
std::string format_cell(double mean, double std);

struct TablePaths {
    std::filesystem::path accuracy_csv, accuracy_md, rank_csv, rank_md;
};

/// Reads results.csv from `dir` and writes accuracy_table.{csv,md} (methods
/// as rows, datasets as columns, "mean (std)" over the five folds with
/// population std) and rank_table.{csv,md} (datasets as rows, then an
/// "Average" row and an "Overall rank" row). Datasets and methods keep
/// their order of first appearance. Throws DataError listing every
/// (dataset, method) pair that lacks five folds.
TablePaths emit_tables(const std::filesystem::path& dir);

std::string render_rank_markdown(const eval::RankTable& table);

}  // namespace tabclust::bench

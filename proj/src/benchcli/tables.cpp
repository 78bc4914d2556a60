#include "tabclust/benchcli/tables.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "tabclust/dataio/csv.hpp"
#include "tabclust/errors.hpp"
#include "tabclust/evalkit/folds.hpp"
#include "tabclust/numkit/format.hpp"

namespace tabclust::bench {

using numkit::format_double;
using numkit::format_fixed1;

namespace {

using Grid = std::vector<std::vector<std::string>>;  // first row is the header

void write_csv_grid(const std::filesystem::path& path, const Grid& grid) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    for (const auto& row : grid) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
        out << '\n';
    }
}

std::string markdown(const Grid& grid) {
    std::vector<std::size_t> width(grid.front().size(), 3);
    for (const auto& row : grid) {
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::ostringstream out;
    const auto emit = [&](const std::vector<std::string>& row) {
        out << '|';
        for (std::size_t c = 0; c < row.size(); ++c) out << ' ' << row[c] << std::string(width[c] - row[c].size(), ' ') << " |";
        out << '\n';
    };
    emit(grid.front());
    out << '|';
    for (std::size_t w : width) out << ' ' << std::string(w, '-') << " |";
    out << '\n';
    for (std::size_t r = 1; r < grid.size(); ++r) emit(grid[r]);
    return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << text;
}

template <typename T>
T parse_num(const std::string& s, const std::string& what) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw DataError("results.csv: bad " + what + " '" + s + "'");
    return v;
}

Grid rank_grid(const eval::RankTable& t) {
    Grid g;
    std::vector<std::string> header{"dataset"};
    for (const auto& m : t.methods) header.push_back(display_name(m));
    g.push_back(header);
    for (std::size_t d = 0; d < t.datasets.size(); ++d) {
        std::vector<std::string> row{t.datasets[d]};
        for (std::size_t r : t.ranks[d]) row.push_back(std::to_string(r));
        g.push_back(row);
    }
    std::vector<std::string> avg{"Average"};
    std::vector<std::string> overall{"Overall rank"};
    for (std::size_t m = 0; m < t.methods.size(); ++m) {
        avg.push_back(format_cell(t.average_mean[m], t.average_std[m]));
        overall.push_back(std::to_string(t.overall_rank[m]));
    }
    g.push_back(avg);
    g.push_back(overall);
    return g;
}

}  // namespace

void write_results_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << "dataset,method,fold,accuracy,chosen_gamma,seed\n";
    for (const auto& r : rows) {
        out << r.dataset << ',' << r.method << ',' << r.fold << ',' << format_double(r.accuracy) << ','
            << (r.chosen_gamma ? format_double(*r.chosen_gamma) : std::string("na")) << ',' << r.seed << '\n';
    }
}

std::vector<ResultRow> read_results_csv(const std::filesystem::path& path) {
    const auto table = data::read_csv_file(path.string());
    const std::vector<std::string> expected{"dataset", "method", "fold", "accuracy", "chosen_gamma", "seed"};
    if (table.header != expected) throw DataError(path.string() + ": unexpected header");
    std::vector<ResultRow> rows;
    for (const auto& cells : table.rows) {
        ResultRow r;
        r.dataset = cells[0];
        r.method = cells[1];
        r.fold = parse_num<std::size_t>(cells[2], "fold");
        r.accuracy = parse_num<double>(cells[3], "accuracy");
        if (cells[4] != "na") r.chosen_gamma = parse_num<double>(cells[4], "gamma");
        r.seed = parse_num<std::uint64_t>(cells[5], "seed");
        rows.push_back(r);
    }
    return rows;
}

std::string display_name(const std::string& method_id) {
    static const std::map<std::string, std::string> names{{"gmm", "GMM"},   {"kmeans", "K-means"},
                                                          {"dec", "DEC"},   {"idec", "IDEC"},
                                                          {"dkm", "DKM"},   {"depict1d", "DEPICT-1D"}};
    const auto it = names.find(method_id);
    return it == names.end() ? method_id : it->second;
}

std::string format_cell(double mean, double std) { return format_fixed1(mean) + " (" + format_fixed1(std) + ")"; }

std::string render_rank_markdown(const eval::RankTable& table) { return markdown(rank_grid(table)); }

TablePaths emit_tables(const std::filesystem::path& dir) {
    const auto rows = read_results_csv(dir / "results.csv");
    std::vector<std::string> datasets, methods;
    std::map<std::pair<std::string, std::string>, std::map<std::size_t, double>> folds;
    for (const auto& r : rows) {
        if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end()) datasets.push_back(r.dataset);
        if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
        folds[{r.dataset, r.method}][r.fold] = r.accuracy;
    }
    if (datasets.empty()) throw DataError(dir.string() + "/results.csv: no results");

    std::string missing;
    std::vector<std::vector<std::optional<eval::AccuracyCell>>> cells(datasets.size());
    for (std::size_t d = 0; d < datasets.size(); ++d) {
        for (const auto& m : methods) {
            const auto it = folds.find({datasets[d], m});
            const bool full = it != folds.end() && it->second.size() == eval::kFoldCount;
            if (!full) {
                missing += (missing.empty() ? "" : ", ") + datasets[d] + "/" + m;
                cells[d].push_back(std::nullopt);
                continue;
            }
            std::vector<double> acc;
            for (const auto& [f, a] : it->second) acc.push_back(a);
            cells[d].push_back(eval::mean_and_std(acc));
        }
    }
    if (!missing.empty()) throw DataError("incomplete results, missing cells: " + missing);

    Grid acc;
    std::vector<std::string> header{"method"};
    header.insert(header.end(), datasets.begin(), datasets.end());
    acc.push_back(header);
    for (std::size_t m = 0; m < methods.size(); ++m) {
        std::vector<std::string> row{display_name(methods[m])};
        for (std::size_t d = 0; d < datasets.size(); ++d) row.push_back(format_cell(cells[d][m]->mean, cells[d][m]->std));
        acc.push_back(row);
    }
    const auto ranks = eval::rank_methods(datasets, methods, cells);
    const Grid rank = rank_grid(ranks);

    TablePaths paths{dir / "accuracy_table.csv", dir / "accuracy_table.md", dir / "rank_table.csv",
                     dir / "rank_table.md"};
    write_csv_grid(paths.accuracy_csv, acc);
    write_text(paths.accuracy_md, markdown(acc));
    write_csv_grid(paths.rank_csv, rank);
    write_text(paths.rank_md, markdown(rank));
    return paths;
}

}  // namespace tabclust::bench

#include "tabclust/evalkit/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tabclust/errors.hpp"

namespace tabclust::eval {

AccuracyCell mean_and_std(const std::vector<double>& values) {
    if (values.empty()) return {};
    const auto n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / n)};
}

RankTable rank_methods(const std::vector<std::string>& datasets, const std::vector<std::string>& methods,
                       const std::vector<std::vector<std::optional<AccuracyCell>>>& cells, TieBreak tie_break) {
    if (methods.empty()) throw InvalidArgument("rank_methods: no methods");
    if (cells.size() != datasets.size()) throw InvalidArgument("rank_methods: one row of cells per dataset expected");
    std::string missing;
    for (std::size_t d = 0; d < datasets.size(); ++d) {
        if (cells[d].size() != methods.size()) throw InvalidArgument("rank_methods: one cell per method expected");
        for (std::size_t m = 0; m < methods.size(); ++m) {
            if (!cells[d][m]) missing += (missing.empty() ? "" : ", ") + datasets[d] + "/" + methods[m];
        }
    }
    if (!missing.empty()) throw InvalidArgument("rank_methods: missing cells: " + missing);

    RankTable table;
    table.datasets = datasets;
    table.methods = methods;
    const std::size_t nm = methods.size();
    for (std::size_t d = 0; d < datasets.size(); ++d) {
        std::vector<std::size_t> order(nm);
        std::iota(order.begin(), order.end(), std::size_t{0});
        const auto& row = cells[d];
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (row[a]->mean != row[b]->mean) return row[a]->mean > row[b]->mean;
            if (tie_break == TieBreak::lower_std_then_registration) return row[a]->std < row[b]->std;
            return false;
        });
        std::vector<std::size_t> ranks(nm);
        for (std::size_t pos = 0; pos < nm; ++pos) ranks[order[pos]] = pos + 1;
        table.ranks.push_back(std::move(ranks));
    }

    table.average_mean.resize(nm, 0.0);
    table.average_std.resize(nm, 0.0);
    for (std::size_t m = 0; m < nm; ++m) {
        std::vector<double> r;
        for (const auto& ranks : table.ranks) r.push_back(static_cast<double>(ranks[m]));
        const AccuracyCell agg = mean_and_std(r);
        table.average_mean[m] = agg.mean;
        table.average_std[m] = agg.std;
    }
    std::vector<std::size_t> order(nm);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return table.average_mean[a] < table.average_mean[b]; });
    table.overall_rank.resize(nm);
    for (std::size_t pos = 0; pos < nm; ++pos) table.overall_rank[order[pos]] = pos + 1;
    return table;
}

}  // namespace tabclust::eval

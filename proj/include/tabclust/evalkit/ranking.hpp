#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace tabclust::eval {

struct AccuracyCell {
    double mean = 0.0;
    double std = 0.0;
};

enum class TieBreak {
    registration_order,          // equal means ranked by method order
    lower_std_then_registration  // equal means ranked by smaller std first
};

struct RankTable {
    std::vector<std::string> datasets;
    std::vector<std::string> methods;             // registration order
    std::vector<std::vector<std::size_t>> ranks;  // dataset x method, 1 = best
    std::vector<double> average_mean;             // per method
    std::vector<double> average_std;              // population std of the ranks
    std::vector<std::size_t> overall_rank;        // per method, 1 = lowest average
};

/// Rank methods per dataset by descending mean accuracy, then aggregate.
/// `cells[d][m]` holds dataset d, method m. Overall ties on the average
/// rank go to registration order. Throws InvalidArgument listing every
/// missing cell.
RankTable rank_methods(const std::vector<std::string>& datasets, const std::vector<std::string>& methods,
                       const std::vector<std::vector<std::optional<AccuracyCell>>>& cells,
                       TieBreak tie_break = TieBreak::lower_std_then_registration);

// Mean and population std.
AccuracyCell mean_and_std(const std::vector<double>& values);

}  // namespace tabclust::eval

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "tabclust/autoenc/training.hpp"

namespace tabclust::embed {

// CSV with header "epoch,recon_loss,cluster_loss,total_loss"; epochs count from 1.
void write_history_csv(std::ostream& out, std::span<const autoenc::EpochLoss> history);
void write_history_csv(const std::filesystem::path& path, std::span<const autoenc::EpochLoss> history);

// Trailing moving average of the total loss; element t averages epochs t-window+1..t.
std::vector<double> moving_average(std::span<const autoenc::EpochLoss> history, std::size_t window = 10);

}  // namespace tabclust::embed

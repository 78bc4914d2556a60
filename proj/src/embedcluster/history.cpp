#include "tabclust/embedcluster/history.hpp"

#include <fstream>
#include <ostream>

#include "tabclust/errors.hpp"
#include "tabclust/numkit/format.hpp"

namespace tabclust::embed {

void write_history_csv(std::ostream& out, std::span<const autoenc::EpochLoss> history) {
    out << "epoch,recon_loss,cluster_loss,total_loss\n";
    for (std::size_t e = 0; e < history.size(); ++e) {
        out << e + 1 << ',' << numkit::format_double(history[e].recon) << ','
            << numkit::format_double(history[e].cluster) << ',' << numkit::format_double(history[e].total) << '\n';
    }
}

void write_history_csv(const std::filesystem::path& path, std::span<const autoenc::EpochLoss> history) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
    write_history_csv(out, history);
}

std::vector<double> moving_average(std::span<const autoenc::EpochLoss> history, std::size_t window) {
    std::vector<double> out;
    if (window == 0 || history.size() < window) return out;
    for (std::size_t t = window - 1; t < history.size(); ++t) {
        double s = 0.0;
        for (std::size_t u = t + 1 - window; u <= t; ++u) s += history[u].total;
        out.push_back(s / static_cast<double>(window));
    }
    return out;
}

}  // namespace tabclust::embed

#pragma once

#include <atomic>
#include <filesystem>
#include <span>
#include <vector>
#include <string>

#include <unistd.h>

#include "tabclust/numkit/matrix.hpp"
#include "tabclust/numkit/rng.hpp"

namespace testutil {

using tabclust::numkit::DenseMatrix;
using tabclust::numkit::Rng;

inline DenseMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double scale = 1.0) {
    DenseMatrix m(rows, cols);
    for (double& v : m.values()) v = scale * rng.normal();
    return m;
}

template <typename Views>
std::vector<double> flatten(const Views& views) {
    std::vector<double> out;
    for (const auto& v : views) out.insert(out.end(), v.begin(), v.end());
    return out;
}

inline void assign(const std::vector<std::span<double>>& views, std::span<const double> flat) {
    std::size_t pos = 0;
    for (const auto& v : views) {
        for (double& x : v) x = flat[pos++];
    }
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    static std::atomic<int> counter{0};
    auto dir = std::filesystem::temp_directory_path() /
               ("tabclust_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testutil

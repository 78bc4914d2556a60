#pragma once

#include <functional>
#include <span>
#include <vector>

namespace tabclust::numkit {

// Central differences (L(p + h e_i) - L(p - h e_i)) / 2h for every coordinate.
std::vector<double> finite_diff_grad(const std::function<double(std::span<const double>)>& loss,
                                     std::span<const double> params, double h = 1e-5);

// max_i |a_i - n_i| / max(|a_i|, |n_i|, floor)
double max_relative_error(std::span<const double> analytic, std::span<const double> numeric,
                          double floor = 1e-8);

}  // namespace tabclust::numkit

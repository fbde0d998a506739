#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mburqr {

struct NmOptions {
    // 0 means 200 * dimension.
    std::size_t max_iterations = 0;
    double f_tolerance = 1e-10;
    double x_tolerance = 1e-8;
    double initial_step = 0.05;
    std::size_t restarts = 2;
};

struct NmOutcome {
    std::vector<double> minimizer;
    double minimum = 0.0;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    std::size_t restarts_used = 0;
    bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

// Called after every iteration with the running iteration count and best value.
using NmObserver = std::function<void(std::size_t, double)>;

NmOutcome nelder_mead_minimize(const Objective& objective, std::span<const double> start,
                               const NmOptions& options = {},
                               const NmObserver& observer = nullptr);

}  // namespace mburqr

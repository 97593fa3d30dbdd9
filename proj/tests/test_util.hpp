#pragma once

#include <cmath>
#include <numeric>
#include <span>
#include <vector>

namespace testutil {

inline double mean(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double sample_sd(std::span<const double> xs) {
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

// Standard error of the sample mean.
inline double std_error(std::span<const double> xs) {
    return sample_sd(xs) / std::sqrt(static_cast<double>(xs.size()));
}

}  // namespace testutil

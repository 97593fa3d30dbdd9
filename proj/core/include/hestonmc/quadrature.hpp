#pragma once

#include <cmath>
#include <cstddef>

namespace hestonmc {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // accumulated error estimate
    int evaluations = 0;
    bool converged = true;
};

namespace detail {

// 15-point Kronrod extension of 7-point Gauss on [-1, 1].
inline constexpr double kKronrodNodes[8] = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993945,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
inline constexpr double kKronrodWeights[8] = {
    0.2094821410847278,
    0.2044329400752989,
    0.1903505780647854,
    0.1690047266392679,
    0.1406532597155259,
    0.1047900103222502,
    0.06309209262997855,
    0.02293532201052922,
};
inline constexpr double kGaussWeights[4] = {
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892767,
    0.1294849661688697,
};

template <typename Fn>
void gk15(const Fn& f, double a, double b, double& kronrod, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f0 = f(mid);
    double gauss = kGaussWeights[0] * f0;
    kronrod = kKronrodWeights[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kKronrodNodes[i];
        const double fsum = f(mid - dx) + f(mid + dx);
        kronrod += kKronrodWeights[i] * fsum;
        if (i % 2 == 0) gauss += kGaussWeights[i / 2] * fsum;
    }
    kronrod *= half;
    gauss *= half;
    err = std::fabs(kronrod - gauss);
    // The (200 |K-G|)^1.5 rescaling of QUADPACK is overkill here; the raw
    // difference is a conservative estimate for these smooth integrands.
}

template <typename Fn>
void adaptive_gk15(const Fn& f, double a, double b, double tol, int depth, QuadResult& acc) {
    double value, err;
    gk15(f, a, b, value, err);
    acc.evaluations += 15;
    if (err <= tol || depth >= 48) {
        acc.value += value;
        acc.error += err;
        if (err > tol) acc.converged = false;
        return;
    }
    const double mid = 0.5 * (a + b);
    adaptive_gk15(f, a, mid, 0.5 * tol, depth + 1, acc);
    adaptive_gk15(f, mid, b, 0.5 * tol, depth + 1, acc);
}

}  // namespace detail

// Adaptive bisection Gauss-Kronrod 15(7) to an absolute tolerance.
template <typename Fn>
QuadResult integrate_gk15(const Fn& f, double a, double b, double abs_tol) {
    QuadResult acc;
    detail::adaptive_gk15(f, a, b, abs_tol, 0, acc);
    return acc;
}

}  // namespace hestonmc

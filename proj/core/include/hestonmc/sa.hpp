#pragma once

#include <cstdint>
#include <vector>

#include "hestonmc/basis.hpp"
#include "hestonmc/payoff.hpp"

namespace hestonmc {

// One-pass stochastic-approximation settings for the backward recursion.
struct SAConfig {
    double gamma = 1.0;      // gain scale
    double chi = 0.1;        // gain decay exponent, in (0, 1]
    bool averaging = true;   // project on the running mean of the iterates
    int exercise_every = 1;  // exercise-grid stride in coarse steps

    void validate() const;  // throws ConfigError
};

// A single time-step cross-section: state, path weight and the discounted
// payoff target collected at the current stopping times.
struct CrossSection {
    std::vector<double> S, V, R;       // state at time t
    std::vector<double> L;             // weight at time t
    std::vector<double> target;        // Z at the current stopping time
    std::vector<std::uint8_t> in_the_money;

    std::size_t size() const { return S.size(); }
};

struct SAFit {
    std::vector<double> alpha;      // final SA iterate
    std::vector<double> alpha_bar;  // running mean over in-the-money updates
    std::size_t itm_count = 0;
};

// One sequential SA sweep over the cross-section. Only in-the-money entries
// update the coefficients; the k-th update uses gain gamma L / k^chi.
SAFit sa_fit_step(const CrossSection& cs, const BasisSpec& basis, const SAConfig& cfg);

// Weighted normal equations on explicit design rows (row-major N x J).
// Throws on a singular design with a pivot diagnostic.
std::vector<double> solve_weighted_least_squares(std::span<const double> design,
                                                 std::span<const double> weights,
                                                 std::span<const double> targets, int J);

// Weighted least-squares solution of the same projection problem the SA
// sweep estimates, restricted to in-the-money entries. Test oracle for the
// SA route.
std::vector<double> ls_regression_oracle(const CrossSection& cs, const BasisSpec& basis);

// Per-exercise-time coefficients kept for inspection and serialization.
struct AveragedCoefficients {
    int steps = 0;
    int J = 0;
    std::vector<int> times;            // exercise times, ascending
    std::vector<double> alpha;         // [time][J] row-major, final iterates
    std::vector<double> alpha_bar;     // [time][J] row-major, averaged
    std::vector<std::size_t> itm_count;
};

struct SAPriceResult {
    double price = 0.0;
    AveragedCoefficients coeffs;
    double mean_sq_residual = 0.0;     // projection residual over all updates
    std::vector<int> exercise_step;    // chosen stopping time per particle
};

// Backward dynamic programming over the exercise grid with SA-fitted
// continuation values. Price is sum(L_tau Z_tau) / sum(L_tau).
SAPriceResult sa_dp_price(const PathSet& paths, const PayoffSpec& payoff,
                          const BasisSpec& basis, const SAConfig& cfg);

}  // namespace hestonmc

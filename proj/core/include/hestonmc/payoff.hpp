#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

#include "hestonmc/paths.hpp"

namespace hestonmc {

enum class PayoffKind { european_straddle, asian_straddle, american_put, asian_call_early };

const char* payoff_kind_name(PayoffKind kind);
PayoffKind payoff_kind_from_name(const std::string& name);  // throws ConfigError

// Discounted exercise value Z_t as a function of the step index and the
// state. European/Asian straddles pay only at maturity; the early-exercise
// kinds pay their discounted intrinsic value at every step.
struct PayoffSpec {
    PayoffKind kind = PayoffKind::european_straddle;
    double strike = 100.0;
    int steps = 50;           // maturity in coarse steps
    int steps_per_year = 50;  // converts step index to years for discounting
    double mu = 0.0;          // discount rate, the model drift

    bool early_exercise() const {
        return kind == PayoffKind::american_put || kind == PayoffKind::asian_call_early;
    }
    bool needs_running_average() const {
        return kind == PayoffKind::asian_straddle || kind == PayoffKind::asian_call_early;
    }

    double discount(int t) const {
        return std::exp(-mu * static_cast<double>(t) / steps_per_year);
    }

    double value(int t, double S, double R) const {
        switch (kind) {
            case PayoffKind::european_straddle:
                return t == steps ? discount(t) * std::fabs(S - strike) : 0.0;
            case PayoffKind::asian_straddle:
                return t == steps ? discount(t) * std::fabs(R - strike) : 0.0;
            case PayoffKind::american_put:
                return discount(t) * std::max(strike - S, 0.0);
            case PayoffKind::asian_call_early:
                return discount(t) * std::max(R - strike, 0.0);
        }
        return 0.0;
    }
};

// R_t = ((t-1) R_{t-1} + S_t) / t with R_0 = 0, so R_t is the mean of
// S_1..S_t. t is the 1-based step index.
inline double running_average_update(double R_prev, double S_t, int t) {
    if (t < 1) throw std::invalid_argument("running_average_update: t must be >= 1");
    return ((t - 1) * R_prev + S_t) / t;
}

// Self-normalized importance-sampling mean: sum(w z) / sum(w).
// Throws on an empty or zero-total-weight input.
double weighted_mean(std::span<const double> weights, std::span<const double> values);

// Terminal-payoff price estimator sum(L_T Z_T) / sum(L_T) on full paths.
double weighted_price(const PathSet& paths, const PayoffSpec& payoff);

}  // namespace hestonmc

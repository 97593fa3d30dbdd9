#include "hestonmc/payoff.hpp"

#include "hestonmc/errors.hpp"

namespace hestonmc {

const char* payoff_kind_name(PayoffKind kind) {
    switch (kind) {
        case PayoffKind::european_straddle: return "european_straddle";
        case PayoffKind::asian_straddle: return "asian_straddle";
        case PayoffKind::american_put: return "american_put";
        case PayoffKind::asian_call_early: return "asian_call_early";
    }
    return "european_straddle";
}

PayoffKind payoff_kind_from_name(const std::string& name) {
    if (name == "european_straddle") return PayoffKind::european_straddle;
    if (name == "asian_straddle") return PayoffKind::asian_straddle;
    if (name == "american_put") return PayoffKind::american_put;
    if (name == "asian_call_early") return PayoffKind::asian_call_early;
    throw ConfigError("unknown payoff kind: " + name);
}

double weighted_mean(std::span<const double> weights, std::span<const double> values) {
    if (weights.empty() || weights.size() != values.size())
        throw ConfigError("weighted_mean: need matching non-empty weights and values");
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        num += weights[j] * values[j];
        den += weights[j];
    }
    if (!(den > 0.0)) throw SimulationError("weighted_mean: total weight is zero");
    return num / den;
}

double weighted_price(const PathSet& paths, const PayoffSpec& payoff) {
    if (paths.count == 0) throw SimulationError("weighted_price: empty path set");
    const int T = payoff.steps;
    if (T != paths.steps)
        throw ConfigError("weighted_price: payoff maturity does not match the path length");
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < paths.count; ++j) {
        const double w = paths.l(j, T);
        num += w * payoff.value(T, paths.s(j, T), paths.r(j, T));
        den += w;
    }
    if (!(den > 0.0)) throw SimulationError("weighted_price: total weight is zero");
    return num / den;
}

}  // namespace hestonmc

#include "hestonmc/basis.hpp"

#include <cmath>

#include "hestonmc/errors.hpp"

namespace hestonmc {

BasisSpec BasisSpec::from_total(int J, int vars, double strike_scale) {
    if (vars != 2 && vars != 3) throw ConfigError("basis supports 2 or 3 variables");
    if (J < 1) throw ConfigError("basis size must be positive");
    const double root = std::round(std::pow(static_cast<double>(J), 1.0 / vars));
    BasisSpec spec{vars, static_cast<int>(root), strike_scale};
    if (spec.size() != J)
        throw ConfigError("basis size J must be a perfect power of the variable count");
    return spec;
}

void laguerre_weighted(double x, std::span<double> out) {
    if (out.empty()) return;
    const double w = std::exp(-0.5 * x);
    out[0] = w;
    if (out.size() == 1) return;
    double prev = 1.0;       // La_0
    double curr = 1.0 - x;   // La_1
    out[1] = w * curr;
    for (std::size_t k = 2; k < out.size(); ++k) {
        const double next =
            ((2.0 * (k - 1) + 1.0 - x) * curr - static_cast<double>(k - 1) * prev) /
            static_cast<double>(k);
        prev = curr;
        curr = next;
        out[k] = w * curr;
    }
}

void basis_eval(const BasisSpec& spec, double S, double V, double R, std::span<double> out) {
    const int p = spec.per_var;
    double ls[16], lv[16], lr[16];
    if (p > 16) throw ConfigError("basis order per variable is capped at 16");
    laguerre_weighted(S / spec.strike_scale, {ls, static_cast<std::size_t>(p)});
    laguerre_weighted(V, {lv, static_cast<std::size_t>(p)});
    if (spec.vars == 2) {
        std::size_t at = 0;
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) out[at++] = ls[i] * lv[j];
        return;
    }
    laguerre_weighted(R / spec.strike_scale, {lr, static_cast<std::size_t>(p)});
    std::size_t at = 0;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            const double sv = ls[i] * lv[j];
            for (int k = 0; k < p; ++k) out[at++] = sv * lr[k];
        }
}

}  // namespace hestonmc

#pragma once

#include <span>

#include "hestonmc/payoff.hpp"

namespace hestonmc {

// Tensor-product weighted-Laguerre basis over (S, V) or (S, V, R). Price-like
// inputs are divided by the strike scale so the design stays well-conditioned
// near the money; V enters raw.
struct BasisSpec {
    int vars = 3;              // 2 = (S, V), 3 = (S, V, R)
    int per_var = 3;           // polynomials per variable
    double strike_scale = 100.0;

    int size() const {
        int j = 1;
        for (int i = 0; i < vars; ++i) j *= per_var;
        return j;
    }

    // Builds the spec from the total size J, which must be a perfect
    // vars-th power. Throws ConfigError otherwise.
    static BasisSpec from_total(int J, int vars, double strike_scale);
};

// First out.size() weighted Laguerre functions l_k(x) = exp(-x/2) La_k(x),
// La_k by the three-term recurrence.
void laguerre_weighted(double x, std::span<double> out);

// Fills out (length spec.size()) with all products of the per-variable
// weighted Laguerre values, ordered lexicographically in (k_S, k_V[, k_R]).
void basis_eval(const BasisSpec& spec, double S, double V, double R, std::span<double> out);

}  // namespace hestonmc

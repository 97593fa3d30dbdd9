#pragma once

#include "hestonmc/params.hpp"

namespace hestonmc {

struct QuadratureDiagnostics {
    int evaluations = 0;
    double error_estimate = 0.0;
    double truncation_bound = 0.0;  // upper integration limit actually used
    bool converged = true;
};

struct EuropeanQuote {
    double call = 0.0;
    double put = 0.0;
    double straddle = 0.0;
    QuadratureDiagnostics quad;
};

// Semi-analytic European prices from the characteristic function, using the
// branch-cut-stable formulation. abs_tol is the target absolute error on the
// price; non-convergence is reported in the diagnostics and as an error.
EuropeanQuote heston_call(const HestonParams& params, double strike, double maturity,
                          double abs_tol = 1e-8);

// Constant-volatility closed form, used as the degenerate-limit oracle.
double black_scholes_call(double S0, double rate, double sigma, double strike,
                          double maturity);

}  // namespace hestonmc

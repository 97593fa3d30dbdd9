#include "hestonmc/reference.hpp"

#include <cmath>
#include <complex>

#include "hestonmc/errors.hpp"
#include "hestonmc/quadrature.hpp"

namespace hestonmc {

namespace {

using cplx = std::complex<double>;

// Integrand of P_j in the two-probability representation, with the
// (xi - d, g = (xi-d)/(xi+d)) branch-stable parameterization.
struct ProbabilityIntegrand {
    double kappa_mr;   // mean-reversion rate of V
    double theta;      // long-run variance level
    double sigma;      // vol of variance
    double v0;
    double rate;
    double T;
    double x0;         // log spot
    double log_k;      // log strike
    double b;          // kappa_mr - rho sigma (j=1) or kappa_mr (j=2)
    double u;          // +1/2 (j=1) or -1/2 (j=2)
    double rho_sigma;

    double operator()(double phi) const {
        const cplx iu(0.0, phi);
        const cplx xi = b - rho_sigma * iu;
        const cplx d = std::sqrt(xi * xi - sigma * sigma * (2.0 * u * iu - phi * phi));
        const cplx g = (xi - d) / (xi + d);
        const cplx edt = std::exp(-d * T);
        const cplx C = rate * iu * T +
                       kappa_mr * theta / (sigma * sigma) *
                           ((xi - d) * T - 2.0 * std::log((1.0 - g * edt) / (1.0 - g)));
        const cplx D = (xi - d) / (sigma * sigma) * (1.0 - edt) / (1.0 - g * edt);
        const cplx f = std::exp(C + D * v0 + iu * x0);
        return (std::exp(-iu * log_k) * f / iu).real();
    }
};

}  // namespace

EuropeanQuote heston_call(const HestonParams& p, double strike, double maturity,
                          double abs_tol) {
    p.validate();
    if (!(strike > 0.0)) throw ConfigError("strike must be positive");
    if (!(maturity > 0.0)) throw ConfigError("maturity must be positive");
    if (!(abs_tol > 0.0)) throw ConfigError("quadrature tolerance must be positive");

    const double kappa_mr = p.varrho;
    const double theta = p.nu / p.varrho;
    const double sigma = p.kappa;

    EuropeanQuote quote;
    double prob[2];
    // Split the price tolerance between the two integrals; the outer factors
    // S0 and K e^{-rT} scale how much each integral can move the price.
    const double scale = std::max(p.S0, strike) / M_PI;
    const double prob_tol = abs_tol / (2.0 * scale * M_PI);

    for (int j = 0; j < 2; ++j) {
        ProbabilityIntegrand f{kappa_mr, theta,
                               sigma,    p.V0,
                               p.mu,     maturity,
                               std::log(p.S0), std::log(strike),
                               j == 0 ? kappa_mr - p.rho * sigma : kappa_mr,
                               j == 0 ? 0.5 : -0.5,
                               p.rho * sigma};

        // Integrate panel by panel; stop once two consecutive panels are
        // negligible (the integrand decays exponentially).
        double total = 0.0;
        double upper = 0.0;
        int quiet_panels = 0;
        const double panel = 25.0;
        QuadResult all;
        for (int k = 0; k < 400 && quiet_panels < 2; ++k) {
            const QuadResult res =
                integrate_gk15(f, k * panel, (k + 1) * panel, prob_tol / 8.0);
            total += res.value;
            all.error += res.error;
            all.evaluations += res.evaluations;
            all.converged = all.converged && res.converged;
            upper = (k + 1) * panel;
            if (std::fabs(res.value) < prob_tol / 8.0) {
                ++quiet_panels;
            } else {
                quiet_panels = 0;
            }
        }
        if (quiet_panels < 2) all.converged = false;
        prob[j] = 0.5 + total / M_PI;
        quote.quad.evaluations += all.evaluations;
        quote.quad.error_estimate += all.error * scale;
        quote.quad.truncation_bound = std::max(quote.quad.truncation_bound, upper);
        quote.quad.converged = quote.quad.converged && all.converged;
    }

    const double discounted_strike = strike * std::exp(-p.mu * maturity);
    quote.call = p.S0 * prob[0] - discounted_strike * prob[1];
    quote.put = quote.call - p.S0 + discounted_strike;
    quote.straddle = quote.call + quote.put;
    if (!quote.quad.converged)
        throw SimulationError("heston_call: quadrature did not converge to tolerance");
    return quote;
}

double black_scholes_call(double S0, double rate, double sigma, double strike,
                          double maturity) {
    const double sq = sigma * std::sqrt(maturity);
    const double d1 = (std::log(S0 / strike) + (rate + 0.5 * sigma * sigma) * maturity) / sq;
    const double d2 = d1 - sq;
    const auto cdf = [](double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); };
    return S0 * cdf(d1) - strike * std::exp(-rate * maturity) * cdf(d2);
}

}  // namespace hestonmc

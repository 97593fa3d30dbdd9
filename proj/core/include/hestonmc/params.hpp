#pragma once

#include <optional>
#include <string>

namespace hestonmc {

// Market parameters of the stochastic-volatility model
//   dS = mu S dt + S sqrt(V) (sqrt(1-rho^2) dB + rho dbeta)
//   dV = (nu - varrho V) dt + kappa sqrt(V) dbeta.
struct HestonParams {
    double S0 = 100.0;    // spot
    double mu = 0.0;      // risk-neutral drift per year
    double nu = 0.1;      // variance drift level (long-run mean is nu/varrho)
    double varrho = 1.0;  // mean-reversion rate
    double kappa = 0.1;   // vol of variance
    double rho = 0.0;     // price/variance correlation
    double V0 = 0.1;      // initial variance

    // 4*nu/kappa^2; > 2 means the variance stays away from zero.
    double feller_ratio() const { return 4.0 * nu / (kappa * kappa); }

    void validate() const;  // throws ConfigError
};

// What to do with a particle whose variance path dips to epsilon: keep its
// last likelihood (freeze) or drop it from the estimate (kill).
enum class StopPolicy { freeze, kill };

// Everything precomputed once per (params, dt, M): the closest-explicit
// order n, the drift and likelihood constants, and the exact per-substep
// OU decay/noise factors.
struct DerivedConstants {
    int n = 1;            // squared-OU components, floor(4 nu/kappa^2 + 1/2) or 1
    double nu_k = 0.0;    // n kappa^2 / 4
    double mu_k = 0.0;    // mu + rho/kappa (nu_k - nu)
    double a = 0.0;       // sqrt(1 - rho^2)
    double b = 0.0;       // mu - nu rho / kappa
    double c = 0.0;       // rho varrho / kappa - 1/2
    double d = 0.0;       // rho / kappa
    double e = 0.0;       // (nu - nu_k) / kappa^2
    double f = 0.0;       // e (kappa^2 - nu - nu_k) / 2
    double sigma_M = 0.0; // kappa sqrt((1 - exp(-varrho dt/M)) / (4 varrho))
    double alpha_M = 0.0; // exp(-varrho dt / (2M))
    double dt = 1.0;      // coarse step length in years
    int M = 2;            // substeps per coarse step (even)
    double epsilon = 0.0; // variance stopping threshold
    double feller = 0.0;  // 4 nu / kappa^2, reported for M/epsilon guidance
    double b_dt = 0.0;
    double varrho_dt = 0.0;

    // Run policy attached here so one object configures a whole evolution.
    StopPolicy stop_policy = StopPolicy::freeze;
    double exponent_cap = 700.0;  // |log-likelihood increment| bound
};

// Precomputes DerivedConstants. M must be even (Simpson) and small; dt > 0;
// epsilon >= 0.
DerivedConstants derive_constants(const HestonParams& params, double dt, int M, double epsilon);

// One of the paper-grade experiment presets: market parameters plus the
// simulation and branching settings published alongside them.
struct ParameterSet {
    std::string name;
    HestonParams market;
    int M = 6;
    int steps_per_year = 50;
    double r_t = 1.05;         // combined-branching band
    double c_eff = 1.05;       // effective-branching band at N_eff = N
    double c_noneff = 2.0;     // effective-branching band at N_eff = 0
    double epsilon = 1e-5;
    StopPolicy stop_policy = StopPolicy::kill;
};

// Built-in presets PS1..PS3; returns nullptr for unknown names.
const ParameterSet* find_parameter_set(const std::string& name);

struct SAParams {
    double gamma = 1.0;
    double chi = 0.1;
};

// Published SA gain parameters keyed by (preset, basis size J, resampler
// family). Empty when the combination was not tabulated.
std::optional<SAParams> sa_defaults(const std::string& set_name, int J, bool bootstrap);

}  // namespace hestonmc

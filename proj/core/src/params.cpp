#include "hestonmc/params.hpp"

#include <array>
#include <limits>
#include <cmath>

#include "hestonmc/errors.hpp"

namespace hestonmc {

void HestonParams::validate() const {
    if (!(S0 > 0.0)) throw ConfigError("S0 must be positive");
    if (!(nu > 0.0)) throw ConfigError("nu must be positive");
    if (!(varrho > 0.0)) throw ConfigError("varrho must be positive");
    if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
    if (!(V0 > 0.0)) throw ConfigError("V0 must be positive");
    if (!(rho >= -1.0 && rho <= 1.0)) throw ConfigError("rho must lie in [-1, 1]");
    if (!std::isfinite(mu)) throw ConfigError("mu must be finite");
}

DerivedConstants derive_constants(const HestonParams& p, double dt, int M, double epsilon) {
    p.validate();
    if (!(dt > 0.0)) throw ConfigError("step length dt must be positive");
    if (M < 2 || M % 2 != 0) throw ConfigError("M must be even and at least 2");
    if (M > 64) throw ConfigError("M larger than 64 is not supported");
    if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be non-negative");

    DerivedConstants k;
    k.feller = p.feller_ratio();
    // Round half up; the slack absorbs representation error in the ratio so
    // published half-integer ratios (e.g. 8.50) land on the intended n.
    k.n = std::max(1, static_cast<int>(std::floor(k.feller + 0.5 + 1e-9)));
    k.nu_k = k.n * p.kappa * p.kappa / 4.0;
    // An integer ratio means the model is its own closest explicit model and
    // every likelihood must be identically one; snap away rounding residue.
    if (std::fabs(k.nu_k - p.nu) <= 8.0 * std::numeric_limits<double>::epsilon() * p.nu)
        k.nu_k = p.nu;
    k.mu_k = p.mu + p.rho / p.kappa * (k.nu_k - p.nu);
    k.a = std::sqrt(1.0 - p.rho * p.rho);
    k.b = p.mu - p.nu * p.rho / p.kappa;
    k.c = p.rho * p.varrho / p.kappa - 0.5;
    k.d = p.rho / p.kappa;
    k.e = (p.nu - k.nu_k) / (p.kappa * p.kappa);
    k.f = k.e * (p.kappa * p.kappa - p.nu - k.nu_k) / 2.0;
    k.alpha_M = std::exp(-p.varrho * dt / (2.0 * M));
    k.sigma_M = p.kappa * std::sqrt((1.0 - std::exp(-p.varrho * dt / M)) / (4.0 * p.varrho));
    k.dt = dt;
    k.M = M;
    k.epsilon = epsilon;
    k.b_dt = k.b * dt;
    k.varrho_dt = p.varrho * dt;
    return k;
}

namespace {

const std::array<ParameterSet, 3> kParameterSets = {{
    {"PS1",
     {100.0, 0.02, 0.085, 6.21, 0.2, -0.7, 0.501},
     /*M=*/2, /*steps_per_year=*/50,
     /*r_t=*/1.05, /*c_eff=*/1.055, /*c_noneff=*/0.2,
     /*epsilon=*/1e-10, StopPolicy::freeze},
    {"PS2",
     {100.0, 0.02, 0.424, 6.00, 0.8, -0.75, 0.11},
     /*M=*/6, /*steps_per_year=*/50,
     /*r_t=*/1.05, /*c_eff=*/1.05, /*c_noneff=*/2.0,
     /*epsilon=*/1e-5, StopPolicy::kill},
    {"PS3",
     {100.0, 0.02, 0.225, 2.86, 0.6, -0.96, 0.07},
     /*M=*/6, /*steps_per_year=*/50,
     /*r_t=*/1.05, /*c_eff=*/1.045, /*c_noneff=*/1.5,
     /*epsilon=*/1e-5, StopPolicy::kill},
}};

struct SATableRow {
    const char* set;
    int J;
    bool bootstrap;
    double gamma;
    double chi;
};

// Gain parameters tabulated per preset, basis size and resampler family.
constexpr std::array<SATableRow, 16> kSATable = {{
    {"PS2", 27, false, 3.0, 0.05},  {"PS2", 27, true, 2.0, 0.05},
    {"PS3", 27, false, 3.0, 0.05},  {"PS3", 27, true, 2.0, 0.10},
    {"PS2", 64, false, 2.0, 0.10},  {"PS2", 64, true, 1.0, 0.10},
    {"PS3", 64, false, 2.0, 0.10},  {"PS3", 64, true, 1.0, 0.10},
    {"PS2", 125, false, 1.0, 0.05}, {"PS2", 125, true, 0.5, 0.05},
    {"PS3", 125, false, 1.0, 0.10}, {"PS3", 125, true, 0.5, 0.10},
    {"PS2", 216, false, 0.5, 0.02}, {"PS2", 216, true, 0.25, 0.02},
    {"PS3", 216, false, 0.8, 0.10}, {"PS3", 216, true, 0.5, 0.10},
}};

}  // namespace

const ParameterSet* find_parameter_set(const std::string& name) {
    for (const auto& ps : kParameterSets) {
        if (ps.name == name) return &ps;
    }
    return nullptr;
}

std::optional<SAParams> sa_defaults(const std::string& set_name, int J, bool bootstrap) {
    for (const auto& row : kSATable) {
        if (set_name == row.set && row.J == J && row.bootstrap == bootstrap) {
            return SAParams{row.gamma, row.chi};
        }
    }
    return std::nullopt;
}

}  // namespace hestonmc

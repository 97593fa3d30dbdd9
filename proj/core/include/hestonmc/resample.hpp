#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hestonmc/particles.hpp"
#include "hestonmc/rng.hpp"

namespace hestonmc {

enum class ResampleKind { none, bootstrap, combined, effective };

const char* resample_kind_name(ResampleKind kind);
ResampleKind resample_kind_from_name(const std::string& name);  // throws ConfigError

struct ResampleMode {
    ResampleKind kind = ResampleKind::none;
    double r = 1.05;         // combined: fixed band parameter, > 1
    double c_eff = 1.05;     // effective: band value when N_eff = N
    double c_noneff = 2.0;   // effective: band value when N_eff = 0
    int every = 1;           // rebalance on every k-th coarse step

    void validate() const;  // throws ConfigError

    static ResampleMode none_mode() { return {}; }
    static ResampleMode bootstrap_mode() { return {ResampleKind::bootstrap}; }
    static ResampleMode combined(double r) { return {ResampleKind::combined, r}; }
    static ResampleMode effective(double c_eff, double c_noneff) {
        return {ResampleKind::effective, 1.05, c_eff, c_noneff};
    }
};

// What one rebalancing step did to the cloud.
struct BranchReport {
    int step = 0;
    double A = 0.0;                  // average weight, initial-N normalized
    double n_eff = 0.0;              // effective count before rebalancing
    double r = 0.0;                  // band parameter actually used
    double branched_fraction = 0.0;  // fraction of particles outside the band
    std::size_t count_before = 0;
    std::size_t count_after = 0;
};

// (sum w)^2 / sum w^2, in [1, N]. Throws on all-zero weights.
double effective_count(std::span<const double> weights);

// Band parameter interpolated between c_noneff (no effective particles)
// and c_eff (all particles effective).
double effective_r(double c_eff, double c_noneff, double n_eff, std::size_t count);

// K uniforms, exactly one in each stratum [(i-1)/K, i/K], in a uniformly
// random order.
std::vector<double> stratified_uniforms(std::size_t K, rng::Stream& stream);

// Branch particles whose weight falls outside [A/r, rA]: each such particle
// leaves floor(w/A) + Bernoulli offspring carrying weight A, placed at the
// parent state; the Bernoulli draws use stratified uniforms. In-band
// particles survive unchanged. Rewrites the current step's history record.
BranchReport branch_step(ParticleSystem& sys, double r_t, rng::Stream& stream);

// Multinomial redraw of the whole cloud via the descending sorted-uniform
// sweep; all weights reset to 1 and the particle count stays fixed.
BranchReport bootstrap_step(ParticleSystem& sys, rng::Stream& stream);

// Apply the configured rebalancing for the system's current step. Returns
// the report, or nothing when the mode (or cadence) leaves the cloud alone.
std::optional<BranchReport> resample_step(ParticleSystem& sys, const ResampleMode& mode,
                                          std::uint64_t seed);

}  // namespace hestonmc

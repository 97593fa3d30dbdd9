#pragma once

#include <cstdint>
#include <span>

#include "hestonmc/particles.hpp"

namespace hestonmc {

// Composite Simpson 1/3 rule over an interval of length dt sampled at the
// M+1 equally spaced values. M must be even and values.size() == M+1.
double simpson(std::span<const double> values, int M, double dt);

// One exact OU substep for all components: y_i <- alpha_M y_i + sigma_M z_i.
void substep_volatility(std::span<double> y, const DerivedConstants& consts,
                        std::span<const double> z);

// Advance every particle by one coarse step: M volatility substeps, the
// Simpson integrals, the log-price update and the likelihood update with the
// epsilon-stop policy. Appends a history record with identity parents when
// recording is on. Deterministic for any `threads` given the same seed.
StepDiagnostics evolve_step(ParticleSystem& sys, const DerivedConstants& consts,
                            std::uint64_t seed, int threads = 1);

}  // namespace hestonmc

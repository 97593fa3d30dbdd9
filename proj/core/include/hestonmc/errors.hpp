#pragma once

#include <stdexcept>
#include <string>

namespace hestonmc {

// Numerical failure inside a simulation or pricing pass. Carries the step
// and particle index of the offending state so a run can be replayed.
class SimulationError : public std::runtime_error {
public:
    explicit SimulationError(const std::string& what, long step = -1, long particle = -1)
        : std::runtime_error(what), step_(step), particle_(particle) {}

    long step() const noexcept { return step_; }
    long particle() const noexcept { return particle_; }

private:
    long step_;
    long particle_;
};

// Invalid user-facing configuration (CLI flags, config file, parameter sets).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hestonmc

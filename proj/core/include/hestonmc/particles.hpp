#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hestonmc/params.hpp"

namespace hestonmc {

// Snapshot of one coarse time step kept for genealogy reconstruction.
// parent[j] indexes the previous step's arrays; for the initial step the
// particles are their own parents.
struct StepRecord {
    std::vector<double> S, V, L;
    std::vector<std::uint32_t> parent;
};

// Weighted particle cloud, struct-of-arrays. V is maintained as the sum of
// squared OU components, so it can never go negative.
struct ParticleSystem {
    int n = 1;                      // OU components per particle
    int step = 0;                   // current coarse step index, 0 = initial
    std::size_t initial_count = 0;  // N, normalizes the branching average
    std::vector<double> S;
    std::vector<double> V;
    std::vector<double> L;          // likelihood weight
    std::vector<double> R;          // running average of S over steps 1..step
    std::vector<double> Y;          // count x n OU components, row-major
    std::vector<std::uint8_t> stopped;
    std::vector<std::uint64_t> lineage;  // per-particle RNG stream id

    bool record_history = true;
    std::vector<StepRecord> history;  // history[t] mirrors the state at step t

    std::size_t count() const { return S.size(); }
};

// Fresh system of N identical particles: S = S0, V = V0, L = 1, R = 0,
// Y_i = sqrt(V0/n), lineage = particle index.
ParticleSystem init_system(const HestonParams& params, const DerivedConstants& consts,
                           std::size_t N, bool record_history = true);

// Scalar per-step health indicators, measured after evolution and before
// any resampling.
struct StepDiagnostics {
    int step = 0;
    std::size_t count = 0;
    std::size_t stopped_count = 0;
    double mean_L = 0.0;
    double min_V = 0.0;
    double n_eff = 0.0;
};

}  // namespace hestonmc

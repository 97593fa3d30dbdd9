#pragma once

#include <cstddef>
#include <vector>

#include "hestonmc/particles.hpp"

namespace hestonmc {

// Full historical paths, one per surviving particle, in row-major
// [particle][step] layout with steps+1 points per path. L is the weight the
// path carried at each step (post-resampling), R the running average of S.
struct PathSet {
    std::size_t count = 0;
    int steps = 0;
    std::vector<double> S, V, L, R;

    std::size_t idx(std::size_t j, int t) const {
        return j * static_cast<std::size_t>(steps + 1) + static_cast<std::size_t>(t);
    }
    double s(std::size_t j, int t) const { return S[idx(j, t)]; }
    double v(std::size_t j, int t) const { return V[idx(j, t)]; }
    double l(std::size_t j, int t) const { return L[idx(j, t)]; }
    double r(std::size_t j, int t) const { return R[idx(j, t)]; }
};

// Rebuild one path per final particle by backward traversal of the parent
// indices, then fill R forward. Requires complete history from step 0.
PathSet reconstruct_paths(const ParticleSystem& sys);

}  // namespace hestonmc

#include "hestonmc/paths.hpp"

#include "hestonmc/errors.hpp"
#include "hestonmc/payoff.hpp"

namespace hestonmc {

PathSet reconstruct_paths(const ParticleSystem& sys) {
    if (!sys.record_history || sys.history.empty())
        throw SimulationError("reconstruct_paths: no recorded history");
    if (static_cast<int>(sys.history.size()) != sys.step + 1)
        throw SimulationError("reconstruct_paths: history is incomplete");

    const int steps = sys.step;
    const std::size_t count = sys.history.back().S.size();
    const std::size_t points = static_cast<std::size_t>(steps) + 1;

    PathSet paths;
    paths.count = count;
    paths.steps = steps;
    paths.S.resize(count * points);
    paths.V.resize(count * points);
    paths.L.resize(count * points);
    paths.R.resize(count * points);

    for (std::size_t j = 0; j < count; ++j) {
        std::size_t node = j;
        for (int t = steps; t >= 0; --t) {
            const StepRecord& rec = sys.history[static_cast<std::size_t>(t)];
            if (node >= rec.S.size())
                throw SimulationError("reconstruct_paths: broken genealogy", t,
                                      static_cast<long>(j));
            const std::size_t at = paths.idx(j, t);
            paths.S[at] = rec.S[node];
            paths.V[at] = rec.V[node];
            paths.L[at] = rec.L[node];
            node = rec.parent[node];
        }
        double r = 0.0;
        paths.R[paths.idx(j, 0)] = 0.0;
        for (int t = 1; t <= steps; ++t) {
            r = running_average_update(r, paths.s(j, t), t);
            paths.R[paths.idx(j, t)] = r;
        }
    }
    return paths;
}

}  // namespace hestonmc

#include "hestonmc/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>

#include "hestonmc/errors.hpp"
#include "hestonmc/parallel.hpp"
#include "hestonmc/payoff.hpp"
#include "hestonmc/rng.hpp"

namespace hestonmc {

ParticleSystem init_system(const HestonParams& params, const DerivedConstants& consts,
                           std::size_t N, bool record_history) {
    if (N == 0) throw ConfigError("particle count must be positive");
    ParticleSystem sys;
    sys.n = consts.n;
    sys.step = 0;
    sys.initial_count = N;
    sys.record_history = record_history;
    sys.S.assign(N, params.S0);
    sys.V.assign(N, params.V0);
    sys.L.assign(N, 1.0);
    sys.R.assign(N, 0.0);
    sys.Y.assign(N * static_cast<std::size_t>(consts.n), std::sqrt(params.V0 / consts.n));
    sys.stopped.assign(N, 0);
    sys.lineage.resize(N);
    for (std::size_t j = 0; j < N; ++j) sys.lineage[j] = j;
    if (record_history) {
        StepRecord rec;
        rec.S = sys.S;
        rec.V = sys.V;
        rec.L = sys.L;
        rec.parent.resize(N);
        for (std::size_t j = 0; j < N; ++j) rec.parent[j] = static_cast<std::uint32_t>(j);
        sys.history.push_back(std::move(rec));
    }
    return sys;
}

double simpson(std::span<const double> values, int M, double dt) {
    if (M < 2 || M % 2 != 0) throw ConfigError("simpson: M must be even and at least 2");
    if (values.size() != static_cast<std::size_t>(M) + 1)
        throw ConfigError("simpson: need exactly M+1 values");
    double odd = 0.0, even = 0.0;
    for (int i = 1; i < M; i += 2) odd += values[i];
    for (int i = 2; i < M; i += 2) even += values[i];
    return dt * (values[0] + 4.0 * odd + 2.0 * even + values[M]) / (3.0 * M);
}

void substep_volatility(std::span<double> y, const DerivedConstants& consts,
                        std::span<const double> z) {
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = consts.alpha_M * y[i] + consts.sigma_M * z[i];
    }
}

namespace {

struct ParticleScratch {
    std::vector<double> z;      // n normals per substep
    std::vector<double> vsub;   // M+1 variance samples
    std::vector<double> vinv;   // reciprocals for the 1/V integral
};

// Evolves particle j in place; returns false if the state went non-finite.
bool evolve_particle(ParticleSystem& sys, const DerivedConstants& k, std::uint64_t seed,
                     std::size_t j, ParticleScratch& scratch) {
    const int n = sys.n;
    const int M = k.M;
    const int t_next = sys.step + 1;
    rng::Stream stream(seed, sys.lineage[j], rng::kDomainEvolve,
                       static_cast<std::uint64_t>(t_next));

    double* y = sys.Y.data() + j * static_cast<std::size_t>(n);
    double* vsub = scratch.vsub.data();
    vsub[0] = sys.V[j];
    for (int sub = 1; sub <= M; ++sub) {
        for (int i = 0; i < n; ++i) scratch.z[i] = stream.next_normal();
        substep_volatility({y, static_cast<std::size_t>(n)}, k, scratch.z);
        double v = 0.0;
        for (int i = 0; i < n; ++i) v += y[i] * y[i];
        vsub[sub] = v;
    }

    const double int_v = simpson({vsub, static_cast<std::size_t>(M) + 1}, M, k.dt);
    const double z_s = stream.next_normal();
    const double v_new = vsub[M];
    const double log_increment =
        k.a * std::sqrt(int_v) * z_s + k.b_dt + k.c * int_v + k.d * (v_new - vsub[0]);
    const double s_new = sys.S[j] * std::exp(log_increment);

    double l_new = sys.L[j];
    if (!sys.stopped[j]) {
        double min_v = vsub[1];
        for (int sub = 2; sub <= M; ++sub) min_v = std::min(min_v, vsub[sub]);
        bool fire_stop = !(min_v > k.epsilon);
        if (!fire_stop && (k.e != 0.0 || k.f != 0.0)) {
            for (int sub = 0; sub <= M; ++sub) scratch.vinv[sub] = 1.0 / vsub[sub];
            const double int_v_inv =
                simpson({scratch.vinv.data(), static_cast<std::size_t>(M) + 1}, M, k.dt);
            const double exponent =
                k.e * (std::log(v_new / vsub[0]) + k.varrho_dt) + k.f * int_v_inv;
            if (std::fabs(exponent) > k.exponent_cap) {
                fire_stop = true;
            } else {
                l_new = sys.L[j] * std::exp(exponent);
            }
        }
        if (fire_stop) {
            sys.stopped[j] = 1;
            l_new = (k.stop_policy == StopPolicy::kill) ? 0.0 : sys.L[j];
        }
    }

    if (!std::isfinite(s_new) || !std::isfinite(l_new)) return false;

    sys.S[j] = s_new;
    sys.V[j] = v_new;
    sys.L[j] = l_new;
    sys.R[j] = running_average_update(sys.R[j], s_new, t_next);
    return true;
}

}  // namespace

StepDiagnostics evolve_step(ParticleSystem& sys, const DerivedConstants& k,
                            std::uint64_t seed, int threads) {
    if (sys.n != k.n)
        throw ConfigError("particle system and derived constants disagree on n");
    const std::size_t count = sys.count();
    std::atomic<long> first_bad{-1};

    parallel_for(count, threads, [&](std::size_t j) {
        thread_local ParticleScratch scratch;
        if (scratch.vsub.size() != static_cast<std::size_t>(k.M) + 1 ||
            scratch.z.size() != static_cast<std::size_t>(sys.n)) {
            scratch.z.assign(sys.n, 0.0);
            scratch.vsub.assign(k.M + 1, 0.0);
            scratch.vinv.assign(k.M + 1, 0.0);
        }
        if (!evolve_particle(sys, k, seed, j, scratch)) {
            long prev = first_bad.load();
            const long mine = static_cast<long>(j);
            while ((prev < 0 || prev > mine) && !first_bad.compare_exchange_weak(prev, mine)) {
            }
        }
    });

    if (long bad = first_bad.load(); bad >= 0) {
        throw SimulationError("non-finite price or likelihood during evolution",
                              sys.step + 1, bad);
    }

    sys.step += 1;

    StepDiagnostics diag;
    diag.step = sys.step;
    diag.count = count;
    double sum_l = 0.0, sum_l2 = 0.0;
    double min_v = std::numeric_limits<double>::infinity();
    std::size_t stopped = 0;
    for (std::size_t j = 0; j < count; ++j) {
        sum_l += sys.L[j];
        sum_l2 += sys.L[j] * sys.L[j];
        min_v = std::min(min_v, sys.V[j]);
        stopped += sys.stopped[j];
    }
    diag.mean_L = sum_l / static_cast<double>(count);
    diag.min_V = min_v;
    diag.n_eff = sum_l2 > 0.0 ? sum_l * sum_l / sum_l2 : 0.0;
    diag.stopped_count = stopped;

    if (sys.record_history) {
        StepRecord rec;
        rec.S = sys.S;
        rec.V = sys.V;
        rec.L = sys.L;
        rec.parent.resize(count);
        for (std::size_t j = 0; j < count; ++j) rec.parent[j] = static_cast<std::uint32_t>(j);
        sys.history.push_back(std::move(rec));
    }
    return diag;
}

}  // namespace hestonmc

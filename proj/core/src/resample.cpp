#include "hestonmc/resample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hestonmc/errors.hpp"

namespace hestonmc {

const char* resample_kind_name(ResampleKind kind) {
    switch (kind) {
        case ResampleKind::none: return "none";
        case ResampleKind::bootstrap: return "bootstrap";
        case ResampleKind::combined: return "combined";
        case ResampleKind::effective: return "effective";
    }
    return "none";
}

ResampleKind resample_kind_from_name(const std::string& name) {
    if (name == "none") return ResampleKind::none;
    if (name == "bootstrap") return ResampleKind::bootstrap;
    if (name == "combined") return ResampleKind::combined;
    if (name == "effective") return ResampleKind::effective;
    throw ConfigError("unknown resample mode: " + name);
}

void ResampleMode::validate() const {
    if (every < 1) throw ConfigError("resample cadence must be >= 1");
    if (kind == ResampleKind::combined && !(r > 1.0))
        throw ConfigError("combined branching requires r > 1");
    if (kind == ResampleKind::effective && (!(c_eff > 0.0) || !(c_noneff > 0.0)))
        throw ConfigError("effective branching requires positive c_eff and c_noneff");
}

double effective_count(std::span<const double> weights) {
    double sum = 0.0, sum_sq = 0.0;
    for (double w : weights) {
        sum += w;
        sum_sq += w * w;
    }
    if (!(sum_sq > 0.0)) throw SimulationError("effective_count: all weights are zero");
    return sum * sum / sum_sq;
}

double effective_r(double c_eff, double c_noneff, double n_eff, std::size_t count) {
    return c_noneff + (c_eff - c_noneff) * n_eff / static_cast<double>(count);
}

std::vector<double> stratified_uniforms(std::size_t K, rng::Stream& stream) {
    std::vector<double> w(K);
    const double width = 1.0 / static_cast<double>(K);
    for (std::size_t i = 0; i < K; ++i) {
        w[i] = (static_cast<double>(i) + stream.next_unit()) * width;
    }
    // Fisher-Yates, driven by the same stream.
    for (std::size_t i = K; i > 1; --i) {
        const std::size_t pick = stream.next_below(i);
        std::swap(w[i - 1], w[pick]);
    }
    return w;
}

namespace {

// Gathers the per-particle columns of one particle into another system's
// arrays; everything but weight and lineage is copied verbatim.
struct Rebuilt {
    std::vector<double> S, V, L, R, Y;
    std::vector<std::uint8_t> stopped;
    std::vector<std::uint64_t> lineage;
    std::vector<std::uint32_t> parent;

    void reserve(std::size_t cap, int n) {
        S.reserve(cap);
        V.reserve(cap);
        L.reserve(cap);
        R.reserve(cap);
        Y.reserve(cap * static_cast<std::size_t>(n));
        stopped.reserve(cap);
        lineage.reserve(cap);
        parent.reserve(cap);
    }

    void append(const ParticleSystem& sys, std::size_t src, double weight,
                std::uint64_t lineage_id) {
        S.push_back(sys.S[src]);
        V.push_back(sys.V[src]);
        L.push_back(weight);
        R.push_back(sys.R[src]);
        const std::size_t n = static_cast<std::size_t>(sys.n);
        const double* y = sys.Y.data() + src * n;
        Y.insert(Y.end(), y, y + n);
        stopped.push_back(sys.stopped[src]);
        lineage.push_back(lineage_id);
        parent.push_back(static_cast<std::uint32_t>(src));
    }

    std::size_t size() const { return S.size(); }
};

void commit(ParticleSystem& sys, Rebuilt&& out) {
    if (out.size() == 0)
        throw SimulationError("particle extinction: no particles left after resampling",
                              sys.step);
    if (out.size() > 4 * sys.initial_count)
        throw SimulationError(
            "particle capacity exceeded after branching; the band parameter is too aggressive",
            sys.step);
    sys.S = std::move(out.S);
    sys.V = std::move(out.V);
    sys.L = std::move(out.L);
    sys.R = std::move(out.R);
    sys.Y = std::move(out.Y);
    sys.stopped = std::move(out.stopped);
    sys.lineage = std::move(out.lineage);
    if (sys.record_history) {
        StepRecord& rec = sys.history.back();
        rec.S = sys.S;
        rec.V = sys.V;
        rec.L = sys.L;
        rec.parent = std::move(out.parent);
    }
}

}  // namespace

BranchReport branch_step(ParticleSystem& sys, double r_t, rng::Stream& stream) {
    const std::size_t count = sys.count();
    if (count == 0) throw SimulationError("branch_step: empty particle system", sys.step);

    double sum_w = 0.0, sum_w2 = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
        sum_w += sys.L[j];
        sum_w2 += sys.L[j] * sys.L[j];
    }
    if (!(sum_w > 0.0))
        throw SimulationError("particle extinction: total weight is zero", sys.step);
    const double A = sum_w / static_cast<double>(sys.initial_count);

    BranchReport report;
    report.step = sys.step;
    report.A = A;
    report.n_eff = sum_w * sum_w / sum_w2;
    report.r = r_t;
    report.count_before = count;

    const double lo = A / r_t;
    const double hi = r_t * A;
    std::vector<std::uint32_t> extreme;
    extreme.reserve(count / 4);
    for (std::size_t j = 0; j < count; ++j) {
        if (!(sys.L[j] >= lo && sys.L[j] <= hi)) extreme.push_back(static_cast<std::uint32_t>(j));
    }
    report.branched_fraction = static_cast<double>(extreme.size()) / static_cast<double>(count);

    if (extreme.empty()) {
        report.count_after = count;
        return report;  // nothing to do, cloud untouched
    }

    std::vector<double> uniforms = stratified_uniforms(extreme.size(), stream);

    Rebuilt out;
    out.reserve(count + extreme.size(), sys.n);
    std::size_t next_extreme = 0;
    for (std::size_t j = 0; j < count; ++j) {
        if (next_extreme < extreme.size() && extreme[next_extreme] == j) {
            ++next_extreme;
            continue;
        }
        out.append(sys, j, sys.L[j], sys.lineage[j]);
    }
    for (std::size_t q = 0; q < extreme.size(); ++q) {
        const std::size_t j = extreme[q];
        const double ratio = sys.L[j] / A;
        const double whole = std::floor(ratio);
        std::size_t offspring = static_cast<std::size_t>(whole);
        if (uniforms[q] <= ratio - whole) ++offspring;
        for (std::size_t child = 0; child < offspring; ++child) {
            out.append(sys, j, A, rng::derive_lineage(sys.lineage[j], child));
        }
    }

    report.count_after = out.size();
    commit(sys, std::move(out));
    return report;
}

BranchReport bootstrap_step(ParticleSystem& sys, rng::Stream& stream) {
    const std::size_t count = sys.count();
    if (count == 0) throw SimulationError("bootstrap_step: empty particle system", sys.step);

    double sum_w = 0.0, sum_w2 = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
        sum_w += sys.L[j];
        sum_w2 += sys.L[j] * sys.L[j];
    }
    if (!(sum_w > 0.0))
        throw SimulationError("particle extinction: total weight is zero", sys.step);

    BranchReport report;
    report.step = sys.step;
    report.A = sum_w / static_cast<double>(sys.initial_count);
    report.n_eff = sum_w * sum_w / sum_w2;
    report.r = 0.0;
    report.branched_fraction = 1.0;
    report.count_before = count;
    report.count_after = count;

    std::vector<double> prefix(count + 1, 0.0);
    for (std::size_t j = 0; j < count; ++j) prefix[j + 1] = prefix[j] + sys.L[j] / sum_w;

    // Descending order statistics of `count` uniforms; the single sweep
    // assigns every output slot its multinomially drawn parent.
    Rebuilt out;
    out.reserve(count, sys.n);
    std::vector<std::uint32_t> parent_of(count);
    double w_next = 1.0;
    std::size_t k = count - 1;
    for (std::size_t j = count; j >= 1; --j) {
        const double u = stream.next_unit();
        const double w = std::pow(u, 1.0 / static_cast<double>(j)) * w_next;
        while (k > 0 && w <= prefix[k]) --k;
        parent_of[j - 1] = static_cast<std::uint32_t>(k);
        w_next = w;
    }

    std::size_t run_start = 0;
    for (std::size_t j = 0; j < count; ++j) {
        if (parent_of[j] != parent_of[run_start]) run_start = j;
        out.append(sys, parent_of[j], 1.0,
                   rng::derive_lineage(sys.lineage[parent_of[j]], j - run_start));
    }

    commit(sys, std::move(out));
    return report;
}

std::optional<BranchReport> resample_step(ParticleSystem& sys, const ResampleMode& mode,
                                          std::uint64_t seed) {
    if (mode.kind == ResampleKind::none) return std::nullopt;
    if (sys.step % mode.every != 0) return std::nullopt;
    rng::Stream stream(seed, 0, rng::kDomainResample, static_cast<std::uint64_t>(sys.step));
    switch (mode.kind) {
        case ResampleKind::bootstrap:
            return bootstrap_step(sys, stream);
        case ResampleKind::combined:
            return branch_step(sys, mode.r, stream);
        case ResampleKind::effective: {
            const double n_eff = effective_count(sys.L);
            const double r_t = effective_r(mode.c_eff, mode.c_noneff, n_eff, sys.count());
            return branch_step(sys, r_t, stream);
        }
        case ResampleKind::none:
            break;
    }
    return std::nullopt;
}

}  // namespace hestonmc

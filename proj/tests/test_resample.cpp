#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hestonmc/errors.hpp"
#include "hestonmc/paths.hpp"
#include "hestonmc/resample.hpp"
#include "hestonmc/simulate.hpp"
#include "test_util.hpp"

using namespace hestonmc;

namespace {

// A bare system with prescribed weights; states carry the particle index so
// copies can be traced back to their source. initial_count may differ from
// the live count to mimic a cloud mid-cascade.
ParticleSystem weighted_system(const std::vector<double>& weights,
                               std::size_t initial_count = 0) {
    ParticleSystem sys;
    sys.n = 1;
    sys.initial_count = initial_count == 0 ? weights.size() : initial_count;
    sys.record_history = false;
    const std::size_t n = weights.size();
    sys.L = weights;
    sys.S.resize(n);
    sys.V.assign(n, 0.04);
    sys.R.resize(n);
    sys.Y.assign(n, 0.2);
    sys.stopped.assign(n, 0);
    sys.lineage.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        sys.S[j] = 100.0 + static_cast<double>(j);
        sys.R[j] = static_cast<double>(j);
        sys.lineage[j] = j;
    }
    return sys;
}

rng::Stream step_stream(std::uint64_t seed) {
    return rng::Stream(seed, 0, rng::kDomainResample, 1);
}

}  // namespace

TEST_CASE("effective_count") {
    SUBCASE("equal weights give N") {
        const std::vector<double> w(12, 0.7);
        CHECK(effective_count(w) == doctest::Approx(12.0).epsilon(1e-12));
    }
    SUBCASE("a single surviving weight gives 1") {
        std::vector<double> w(10, 0.0);
        w[3] = 2.5;
        CHECK(effective_count(w) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("hand-computed value") {
        const std::vector<double> w = {2.0, 1.0, 1.0};
        CHECK(effective_count(w) == doctest::Approx(16.0 / 6.0).epsilon(1e-12));
    }
    SUBCASE("scale invariance") {
        rng::Stream s(5, 0, rng::kDomainGeneric, 0);
        std::vector<double> w(40);
        for (double& x : w) x = s.next_unit() + 0.01;
        const double base = effective_count(w);
        for (double c : {1e-6, 0.5, 3.0, 1e8}) {
            std::vector<double> scaled = w;
            for (double& x : scaled) x *= c;
            CHECK(effective_count(scaled) == doctest::Approx(base).epsilon(1e-12));
        }
    }
    SUBCASE("all-zero weights rejected") {
        const std::vector<double> w(4, 0.0);
        CHECK_THROWS_AS(effective_count(w), SimulationError);
    }
}

TEST_CASE("effective_r interpolation") {
    CHECK(effective_r(1.055, 0.2, 100.0, 100) == doctest::Approx(1.055).epsilon(1e-14));
    CHECK(effective_r(1.05, 2.0, 50.0, 100) == doctest::Approx(2.0 - 0.95 * 0.5).epsilon(1e-14));
    for (double n_eff : {1.0, 17.0, 63.0}) {
        CHECK(effective_r(1.3, 1.3, n_eff, 64) == doctest::Approx(1.3).epsilon(1e-14));
    }
    // Published band constants are representable as-is.
    ResampleMode mode = ResampleMode::effective(1.055, 0.2);
    mode.validate();
    CHECK(mode.c_eff == 1.055);
    CHECK(mode.c_noneff == 0.2);
}

TEST_CASE("stratified uniforms hit every stratum exactly once") {
    auto stream = step_stream(77);
    for (std::size_t K : {std::size_t{1}, std::size_t{2}, std::size_t{7}, std::size_t{64},
                          std::size_t{1000}}) {
        std::vector<double> u = stratified_uniforms(K, stream);
        REQUIRE(u.size() == K);
        std::sort(u.begin(), u.end());
        for (std::size_t i = 0; i < K; ++i) {
            CHECK(u[i] > static_cast<double>(i) / static_cast<double>(K));
            CHECK(u[i] <= static_cast<double>(i + 1) / static_cast<double>(K));
        }
    }
}

TEST_CASE("branch_step with an infinite band is the identity") {
    ParticleSystem sys = weighted_system({0.2, 1.0, 5.0, 0.01});
    const auto before_s = sys.S;
    const auto before_l = sys.L;
    auto stream = step_stream(1);
    const BranchReport report =
        branch_step(sys, std::numeric_limits<double>::infinity(), stream);
    CHECK(sys.S == before_s);
    CHECK(sys.L == before_l);
    CHECK(report.branched_fraction == 0.0);
    CHECK(report.count_after == 4);
}

TEST_CASE("an exact integer weight ratio branches deterministically") {
    // A = (3 + 0 + 0)/3 = 1, so particle 0 has ratio exactly 3 and the
    // zero-weight particles die with certainty.
    ParticleSystem sys = weighted_system({3.0, 0.0, 0.0});
    auto stream = step_stream(2);
    const BranchReport report = branch_step(sys, 2.0, stream);
    CHECK(report.A == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(report.branched_fraction == 1.0);
    REQUIRE(report.count_after == 3);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(sys.S[j] == 100.0);  // all copies of particle 0
        CHECK(sys.L[j] == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("offspring counts are unbiased for fractional ratios") {
    // Weights (1.4, 0.6): A = 1, both extreme for r close to 1.
    const int trials = 20000;
    double total_high = 0.0, total_low = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        ParticleSystem sys = weighted_system({1.4, 0.6});
        rng::Stream stream(900 + trial, 0, rng::kDomainResample, 1);
        branch_step(sys, 1.0001, stream);
        int high = 0, low = 0;
        for (std::size_t j = 0; j < sys.count(); ++j) {
            if (sys.S[j] == 100.0) ++high;
            if (sys.S[j] == 101.0) ++low;
        }
        total_high += high;
        total_low += low;
    }
    // Offspring are floor(ratio) + Bernoulli(frac); 3 sigma bands.
    const double se = std::sqrt(0.4 * 0.6 / trials);
    CHECK(std::fabs(total_high / trials - 1.4) < 3.0 * se);
    CHECK(std::fabs(total_low / trials - 0.6) < 3.0 * se);
}

TEST_CASE("branching preserves count and total weight in expectation") {
    // r = 1 branches everything, so E[count out] = initial N and
    // E[sum of weights out] = sum of weights in.
    const std::vector<double> weights = {0.3, 1.4, 2.7, 0.9, 0.1, 1.0, 2.2, 0.4};
    double sum_in = 0.0;
    for (double w : weights) sum_in += w;
    const int trials = 20000;
    std::vector<double> counts(trials), sums(trials);
    for (int trial = 0; trial < trials; ++trial) {
        ParticleSystem sys = weighted_system(weights);
        rng::Stream stream(31000 + trial, 0, rng::kDomainResample, 1);
        branch_step(sys, 1.0, stream);
        counts[trial] = static_cast<double>(sys.count());
        double s = 0.0;
        for (double l : sys.L) s += l;
        sums[trial] = s;
    }
    CHECK(std::fabs(testutil::mean(counts) - 8.0) < 3.0 * testutil::std_error(counts));
    CHECK(std::fabs(testutil::mean(sums) - sum_in) < 3.0 * testutil::std_error(sums));
}

TEST_CASE("branch extinction and capacity overflow abort") {
    SUBCASE("all-zero weights") {
        ParticleSystem sys = weighted_system({0.0, 0.0});
        auto stream = step_stream(3);
        CHECK_THROWS_AS(branch_step(sys, 1.5, stream), SimulationError);
    }
    SUBCASE("low fractional ratios can die out entirely") {
        bool died = false;
        for (int seed = 0; seed < 64 && !died; ++seed) {
            // After heavy attrition the ratios 0.6 and 0.4 are both
            // fractional, and both Bernoulli draws can come up empty.
            ParticleSystem sys = weighted_system({0.6, 0.4}, 1);
            rng::Stream stream(seed, 0, rng::kDomainResample, 1);
            try {
                branch_step(sys, 1.1, stream);
            } catch (const SimulationError&) {
                died = true;
            }
        }
        CHECK(died);
    }
    SUBCASE("capacity guard trips once a cascade outgrows 4N") {
        // 44 in-band particles survive as-is while the light one branches,
        // leaving more than 4x the initial 10 particles either way.
        std::vector<double> weights(44, 10.0);
        weights.push_back(1.0);
        ParticleSystem sys = weighted_system(weights, 10);
        auto stream = step_stream(4);
        CHECK_THROWS_AS(branch_step(sys, 5.0, stream), SimulationError);
    }
}

TEST_CASE("bootstrap marginals match the multinomial law") {
    const int trials = 20000;
    std::vector<double> parent0(trials);
    for (int trial = 0; trial < trials; ++trial) {
        ParticleSystem sys = weighted_system({3.0, 1.0});
        rng::Stream stream(5000 + trial, 0, rng::kDomainResample, 1);
        const BranchReport report = bootstrap_step(sys, stream);
        CHECK(report.count_after == 2);
        int c0 = 0;
        for (std::size_t j = 0; j < sys.count(); ++j) {
            if (sys.S[j] == 100.0) ++c0;
            CHECK(sys.L[j] == 1.0);
        }
        parent0[trial] = c0;
    }
    // Count of parent 0 is Binomial(2, 0.75).
    const double se = std::sqrt(2.0 * 0.75 * 0.25 / trials);
    CHECK(std::fabs(testutil::mean(parent0) - 1.5) < 3.0 * se);
}

TEST_CASE("bootstrap restores full effectiveness") {
    ParticleSystem sys = weighted_system({0.05, 3.0, 1.2, 0.7, 2.1});
    auto stream = step_stream(6);
    bootstrap_step(sys, stream);
    CHECK(effective_count(sys.L) == doctest::Approx(5.0).epsilon(1e-12));

    ParticleSystem dead = weighted_system({0.0, 0.0, 0.0});
    auto dead_stream = step_stream(7);
    CHECK_THROWS_AS(bootstrap_step(dead, dead_stream), SimulationError);
}

TEST_CASE("bootstrap with equal weights keeps each parent once on average") {
    const int trials = 10000;
    std::vector<double> count0(trials);
    for (int trial = 0; trial < trials; ++trial) {
        ParticleSystem sys = weighted_system({1.0, 1.0, 1.0, 1.0});
        rng::Stream stream(80000 + trial, 0, rng::kDomainResample, 1);
        bootstrap_step(sys, stream);
        int c = 0;
        for (std::size_t j = 0; j < sys.count(); ++j)
            if (sys.S[j] == 100.0) ++c;
        count0[trial] = c;
    }
    const double se = std::sqrt(4.0 * 0.25 * 0.75 / trials);
    CHECK(std::fabs(testutil::mean(count0) - 1.0) < 3.0 * se);
}

TEST_CASE("resample mode validation") {
    ResampleMode bad_combined = ResampleMode::combined(1.0);
    CHECK_THROWS_AS(bad_combined.validate(), ConfigError);
    ResampleMode bad_cadence;
    bad_cadence.every = 0;
    CHECK_THROWS_AS(bad_cadence.validate(), ConfigError);
    ResampleMode bad_eff = ResampleMode::effective(0.0, 1.0);
    CHECK_THROWS_AS(bad_eff.validate(), ConfigError);
    CHECK_THROWS_AS(resample_kind_from_name("multinomial"), ConfigError);
}

TEST_CASE("genealogy reconstruction") {
    const HestonParams p = find_parameter_set("PS2")->market;
    const auto k = derive_constants(p, 1.0 / 50, 6, 1e-5);

    SUBCASE("no resampling reproduces the raw paths") {
        ParticleSystem sys = init_system(p, k, 200, true);
        std::vector<std::vector<double>> raw_s;
        raw_s.push_back(std::vector<double>(sys.S));
        for (int t = 1; t <= 10; ++t) {
            evolve_step(sys, k, 42);
            raw_s.push_back(std::vector<double>(sys.S));
        }
        const PathSet paths = reconstruct_paths(sys);
        CHECK(paths.count == 200);
        CHECK(paths.steps == 10);
        bool match = true;
        for (std::size_t j = 0; j < paths.count; ++j)
            for (int t = 0; t <= 10; ++t) match = match && paths.s(j, t) == raw_s[t][j];
        CHECK(match);
        // Running average against a direct mean.
        for (std::size_t j : {std::size_t{0}, std::size_t{150}}) {
            double direct = 0.0;
            for (int t = 1; t <= 10; ++t) direct += paths.s(j, t);
            CHECK(paths.r(j, 10) == doctest::Approx(direct / 10).epsilon(1e-13));
        }
    }

    SUBCASE("children share their parent's prefix after branching") {
        ParticleSystem sys = init_system(p, k, 400, true);
        const ResampleMode mode = ResampleMode::effective(1.05, 2.0);
        for (int t = 1; t <= 12; ++t) {
            evolve_step(sys, k, 43);
            resample_step(sys, mode, 43);
        }
        const PathSet paths = reconstruct_paths(sys);
        CHECK(paths.count == sys.count());
        // Two paths agreeing at step 6 must share the whole prefix.
        bool found_shared = false;
        for (std::size_t a = 0; a < paths.count && !found_shared; ++a) {
            for (std::size_t b = a + 1; b < paths.count; ++b) {
                if (paths.s(a, 6) == paths.s(b, 6)) {
                    found_shared = true;
                    for (int t = 0; t <= 6; ++t) CHECK(paths.s(a, t) == paths.s(b, t));
                    break;
                }
            }
        }
        CHECK(found_shared);
    }
}

#include <doctest.h>

#include <cmath>
#include <vector>

#include "hestonmc/errors.hpp"
#include "hestonmc/experiment.hpp"
#include "hestonmc/resample.hpp"
#include "hestonmc/sa.hpp"
#include "hestonmc/simulate.hpp"
#include "test_util.hpp"

using namespace hestonmc;

namespace {

PathSet small_path_set(const std::string& set_name, std::size_t N, int steps,
                       std::uint64_t seed, bool branch) {
    const ParameterSet* ps = find_parameter_set(set_name);
    auto k = derive_constants(ps->market, 1.0 / ps->steps_per_year, ps->M, ps->epsilon);
    k.stop_policy = ps->stop_policy;
    ParticleSystem sys = init_system(ps->market, k, N, true);
    const ResampleMode mode =
        branch ? ResampleMode::effective(ps->c_eff, ps->c_noneff) : ResampleMode::none_mode();
    for (int t = 1; t <= steps; ++t) {
        evolve_step(sys, k, seed);
        resample_step(sys, mode, seed);
    }
    return reconstruct_paths(sys);
}

// Cross-section with a known linear structure: target = basis . theta + noise.
CrossSection synthetic_cross_section(std::size_t n, const BasisSpec& basis,
                                     std::vector<double>& theta, std::uint64_t seed,
                                     double noise) {
    const int J = basis.size();
    theta.resize(J);
    rng::Stream coeffs(seed, 1, rng::kDomainGeneric, 0);
    for (double& t : theta) t = 0.5 + 1.5 * coeffs.next_unit();

    CrossSection cs;
    cs.S.resize(n);
    cs.V.resize(n);
    cs.R.resize(n);
    cs.L.resize(n);
    cs.target.resize(n);
    cs.in_the_money.assign(n, 1);
    std::vector<double> e(J);
    rng::Stream s(seed, 2, rng::kDomainGeneric, 0);
    for (std::size_t j = 0; j < n; ++j) {
        cs.S[j] = 100.0 * std::exp(0.25 * s.next_normal() - 0.03);
        cs.V[j] = 0.1 * std::exp(0.5 * s.next_normal());
        cs.R[j] = 100.0 * std::exp(0.18 * s.next_normal());
        cs.L[j] = std::exp(0.3 * s.next_normal() - 0.045);
        basis_eval(basis, cs.S[j], cs.V[j], cs.R[j], e);
        double y = 0.0;
        for (int i = 0; i < J; ++i) y += theta[i] * e[i];
        cs.target[j] = y + noise * s.next_normal();
    }
    return cs;
}

}  // namespace

TEST_CASE("running average recursion") {
    SUBCASE("constant path") {
        double r = 0.0;
        for (int t = 1; t <= 20; ++t) {
            r = running_average_update(r, 7.5, t);
            CHECK(r == doctest::Approx(7.5).epsilon(1e-15));
        }
    }
    SUBCASE("1,2,3 averages to 2") {
        double r = 0.0;
        r = running_average_update(r, 1.0, 1);
        r = running_average_update(r, 2.0, 2);
        r = running_average_update(r, 3.0, 3);
        CHECK(r == doctest::Approx(2.0).epsilon(1e-15));
    }
    SUBCASE("random path equals the direct mean") {
        rng::Stream s(17, 0, rng::kDomainGeneric, 0);
        double r = 0.0, direct = 0.0;
        for (int t = 1; t <= 257; ++t) {
            const double x = 50.0 + 100.0 * s.next_unit();
            direct += x;
            r = running_average_update(r, x, t);
        }
        CHECK(r == doctest::Approx(direct / 257.0).epsilon(1e-13));
    }
    SUBCASE("step zero is rejected") {
        CHECK_THROWS_AS(running_average_update(0.0, 1.0, 0), std::invalid_argument);
    }
}

TEST_CASE("weighted mean estimator") {
    SUBCASE("unit weights give the plain mean") {
        const std::vector<double> w(5, 1.0);
        const std::vector<double> z = {1.0, 2.0, 3.0, 4.0, 10.0};
        CHECK(weighted_mean(w, z) == doctest::Approx(4.0).epsilon(1e-15));
    }
    SUBCASE("zero total weight is an error") {
        const std::vector<double> w(3, 0.0);
        const std::vector<double> z(3, 1.0);
        CHECK_THROWS_AS(weighted_mean(w, z), SimulationError);
    }
}

TEST_CASE("weighted Laguerre basis") {
    SUBCASE("order zero is the exponential weight") {
        for (double x : {0.0, 0.3, 2.0, 9.0}) {
            double v[1];
            laguerre_weighted(x, {v, 1});
            CHECK(v[0] == doctest::Approx(std::exp(-0.5 * x)).epsilon(1e-15));
        }
    }
    SUBCASE("first order at x = 2") {
        double v[2];
        laguerre_weighted(2.0, {v, 2});
        CHECK(v[1] == doctest::Approx(-std::exp(-1.0)).epsilon(1e-14));
    }
    SUBCASE("recurrence matches the explicit low-order polynomials") {
        rng::Stream s(23, 0, rng::kDomainGeneric, 0);
        for (int trial = 0; trial < 30; ++trial) {
            const double x = 5.0 * s.next_unit();
            double v[4];
            laguerre_weighted(x, {v, 4});
            const double w = std::exp(-0.5 * x);
            const double la2 = (x * x - 4.0 * x + 2.0) / 2.0;
            const double la3 = (-x * x * x + 9.0 * x * x - 18.0 * x + 6.0) / 6.0;
            CHECK(v[2] == doctest::Approx(w * la2).epsilon(1e-12));
            CHECK(v[3] == doctest::Approx(w * la3).epsilon(1e-12));
        }
    }
    SUBCASE("tensor layout is lexicographic with 27 products") {
        const BasisSpec spec = BasisSpec::from_total(27, 3, 100.0);
        CHECK(spec.per_var == 3);
        std::vector<double> e(27);
        const double S = 118.0, V = 0.23, R = 96.0;
        basis_eval(spec, S, V, R, e);
        double ls[3], lv[3], lr[3];
        laguerre_weighted(S / 100.0, {ls, 3});
        laguerre_weighted(V, {lv, 3});
        laguerre_weighted(R / 100.0, {lr, 3});
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    CHECK(e[(i * 3 + j) * 3 + k] ==
                          doctest::Approx(ls[i] * lv[j] * lr[k]).epsilon(1e-14));
        // Stability: identical spec and state produce the identical vector.
        std::vector<double> e2(27);
        basis_eval(spec, S, V, R, e2);
        CHECK(e == e2);
    }
    SUBCASE("basis size must be a perfect power") {
        CHECK_THROWS_AS(BasisSpec::from_total(30, 3, 100.0), ConfigError);
        CHECK_THROWS_AS(BasisSpec::from_total(5, 2, 100.0), ConfigError);
        CHECK(BasisSpec::from_total(64, 3, 100.0).per_var == 4);
        CHECK(BasisSpec::from_total(49, 2, 100.0).per_var == 7);
    }
}

TEST_CASE("weighted least squares oracle") {
    SUBCASE("constant design recovers the weighted mean") {
        const std::vector<double> design = {1.0, 1.0, 1.0, 1.0};
        const std::vector<double> w = {0.5, 2.0, 1.0, 0.5};
        const std::vector<double> y = {10.0, 20.0, 30.0, 40.0};
        const auto alpha = solve_weighted_least_squares(design, w, y, 1);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            num += w[i] * y[i];
            den += w[i];
        }
        CHECK(alpha[0] == doctest::Approx(num / den).epsilon(1e-13));
    }
    SUBCASE("orthonormal design returns the projections") {
        // Rows of the identity: A = I, so alpha = b = targets.
        const int J = 3;
        std::vector<double> design(9, 0.0);
        for (int i = 0; i < J; ++i) design[i * J + i] = 1.0;
        const std::vector<double> w(3, 1.0);
        const std::vector<double> y = {4.0, -2.0, 0.5};
        const auto alpha = solve_weighted_least_squares(design, w, y, J);
        for (int i = 0; i < J; ++i) CHECK(alpha[i] == doctest::Approx(y[i]).epsilon(1e-13));
    }
    SUBCASE("residuals are orthogonal to the design columns") {
        rng::Stream s(31, 0, rng::kDomainGeneric, 0);
        const int J = 4;
        const std::size_t n = 60;
        std::vector<double> design(n * J), w(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (int j = 0; j < J; ++j) design[i * J + j] = 2.0 * s.next_unit() - 1.0;
            w[i] = 0.1 + s.next_unit();
            y[i] = 2.0 * s.next_unit() - 1.0;
        }
        const auto alpha = solve_weighted_least_squares(design, w, y, J);
        for (int j = 0; j < J; ++j) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double resid = y[i];
                for (int q = 0; q < J; ++q) resid -= design[i * J + q] * alpha[q];
                dot += w[i] * design[i * J + j] * resid;
            }
            CHECK(std::fabs(dot) < 1e-10);
        }
    }
    SUBCASE("a duplicated column is reported as singular") {
        const std::size_t n = 10;
        const int J = 2;
        std::vector<double> design(n * J), w(n, 1.0), y(n, 1.0);
        rng::Stream s(37, 0, rng::kDomainGeneric, 0);
        for (std::size_t i = 0; i < n; ++i) {
            design[i * J] = s.next_unit();
            design[i * J + 1] = design[i * J];
        }
        CHECK_THROWS_WITH_AS(solve_weighted_least_squares(design, w, y, J),
                             doctest::Contains("singular"), SimulationError);
    }
}

TEST_CASE("single-pass SA with averaging approaches the least-squares solution") {
    const BasisSpec basis = BasisSpec::from_total(8, 3, 100.0);
    std::vector<double> theta;
    const CrossSection cs = synthetic_cross_section(20000, basis, theta, 2024, 0.1);
    const auto oracle = ls_regression_oracle(cs, basis);
    const SAConfig cfg{1.0, 0.3, true, 1};
    const SAFit fit = sa_fit_step(cs, basis, cfg);
    REQUIRE(fit.itm_count == 20000);
    for (int i = 0; i < basis.size(); ++i) {
        CHECK(fit.alpha_bar[i] == doctest::Approx(oracle[i]).epsilon(0.05));
    }
}

TEST_CASE("SA updates are linear in the payoff scale") {
    const BasisSpec basis = BasisSpec::from_total(8, 3, 100.0);
    std::vector<double> theta;
    CrossSection cs = synthetic_cross_section(4000, basis, theta, 11, 0.05);
    const SAConfig cfg{0.8, 0.4, true, 1};
    const SAFit base = sa_fit_step(cs, basis, cfg);
    const double scale = 37.5;
    for (double& t : cs.target) t *= scale;
    const SAFit scaled = sa_fit_step(cs, basis, cfg);
    for (int i = 0; i < basis.size(); ++i) {
        CHECK(scaled.alpha[i] == doctest::Approx(scale * base.alpha[i]).epsilon(1e-11));
        CHECK(scaled.alpha_bar[i] == doctest::Approx(scale * base.alpha_bar[i]).epsilon(1e-11));
    }
}

TEST_CASE("terminal-only payoffs reduce the backward pass to the weighted price") {
    const PathSet paths = small_path_set("PS2", 2000, 20, 99, true);
    PayoffSpec payoff;
    payoff.kind = PayoffKind::european_straddle;
    payoff.strike = 100.0;
    payoff.steps = 20;
    payoff.steps_per_year = 50;
    payoff.mu = 0.02;
    const BasisSpec basis = BasisSpec::from_total(9, 2, 100.0);
    const SAConfig cfg{1.0, 0.1, true, 1};
    const SAPriceResult res = sa_dp_price(paths, payoff, basis, cfg);
    CHECK(res.price == weighted_price(paths, payoff));
    for (int tau : res.exercise_step) CHECK(tau == 20);
}

TEST_CASE("a dominating immediate payoff is exercised at time zero") {
    const PathSet paths = small_path_set("PS2", 500, 10, 7, false);
    PayoffSpec payoff;
    payoff.kind = PayoffKind::american_put;
    payoff.strike = 1e5;
    payoff.steps = 10;
    payoff.steps_per_year = 50;
    payoff.mu = 0.02;
    const BasisSpec basis = BasisSpec::from_total(4, 2, 1e5);
    const SAConfig cfg{1.0, 0.5, true, 1};
    const SAPriceResult res = sa_dp_price(paths, payoff, basis, cfg);
    CHECK(res.price == doctest::Approx(payoff.value(0, paths.s(0, 0), 0.0)).epsilon(1e-12));
    for (int tau : res.exercise_step) CHECK(tau == 0);
}

TEST_CASE("price and exercise rule are invariant under a currency rescale") {
    const PathSet paths = small_path_set("PS2", 3000, 25, 31, true);
    PayoffSpec payoff;
    payoff.kind = PayoffKind::asian_call_early;
    payoff.strike = 100.0;
    payoff.steps = 25;
    payoff.steps_per_year = 50;
    payoff.mu = 0.02;
    const BasisSpec basis = BasisSpec::from_total(27, 3, payoff.strike);
    const SAConfig cfg{1.0, 0.1, true, 1};
    const SAPriceResult base = sa_dp_price(paths, payoff, basis, cfg);

    const double c = 100.0;
    PathSet scaled = paths;
    for (double& s : scaled.S) s *= c;
    for (double& r : scaled.R) r *= c;
    PayoffSpec payoff_scaled = payoff;
    payoff_scaled.strike *= c;
    const BasisSpec basis_scaled = BasisSpec::from_total(27, 3, payoff_scaled.strike);
    const SAPriceResult res = sa_dp_price(scaled, payoff_scaled, basis_scaled, cfg);

    CHECK(res.price == doctest::Approx(c * base.price).epsilon(1e-10));
    CHECK(res.exercise_step == base.exercise_step);
}

TEST_CASE("early exercise rights are worth at least the European value") {
    std::vector<double> gaps;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const PathSet paths = small_path_set("PS2", 4000, 25, 1000 + seed, true);
        PayoffSpec payoff;
        payoff.kind = PayoffKind::asian_call_early;
        payoff.strike = 100.0;
        payoff.steps = 25;
        payoff.steps_per_year = 50;
        payoff.mu = 0.02;
        const BasisSpec basis = BasisSpec::from_total(27, 3, 100.0);
        const SAConfig cfg{1.0, 0.05, true, 1};
        const double american = sa_dp_price(paths, payoff, basis, cfg).price;

        // European version of the same payoff: exercise forced at maturity.
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < paths.count; ++j) {
            const double w = paths.l(j, 25);
            num += w * payoff.value(25, paths.s(j, 25), paths.r(j, 25));
            den += w;
        }
        gaps.push_back(american - num / den);
    }
    const double mean_gap = testutil::mean(gaps);
    const double se = testutil::std_error(gaps);
    CHECK(mean_gap > -3.0 * se);
}

TEST_CASE("degenerate cross sections are rejected with diagnostics") {
    const BasisSpec basis = BasisSpec::from_total(8, 3, 100.0);
    CrossSection cs;
    cs.S = {100.0};
    cs.V = {0.1};
    cs.R = {100.0};
    cs.L = {1.0};
    cs.target = {5.0};
    cs.in_the_money = {0};
    CHECK_THROWS_AS(ls_regression_oracle(cs, basis), SimulationError);
}

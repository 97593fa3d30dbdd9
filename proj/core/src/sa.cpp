#include "hestonmc/sa.hpp"

#include <cmath>
#include <vector>

#include "hestonmc/errors.hpp"

namespace hestonmc {

void SAConfig::validate() const {
    if (!(gamma > 0.0)) throw ConfigError("SA gamma must be positive");
    if (!(chi > 0.0 && chi <= 1.0)) throw ConfigError("SA chi must lie in (0, 1]");
    if (exercise_every < 1) throw ConfigError("exercise grid stride must be >= 1");
}

SAFit sa_fit_step(const CrossSection& cs, const BasisSpec& basis, const SAConfig& cfg) {
    const int J = basis.size();
    SAFit fit;
    fit.alpha.assign(J, 0.0);
    fit.alpha_bar.assign(J, 0.0);

    std::vector<double> e(J);
    std::size_t k = 0;
    for (std::size_t j = 0; j < cs.size(); ++j) {
        if (!cs.in_the_money[j]) continue;
        ++k;
        basis_eval(basis, cs.S[j], cs.V[j], cs.R[j], e);
        double proj = 0.0;
        for (int i = 0; i < J; ++i) proj += e[i] * fit.alpha[i];
        const double gain = cfg.gamma * cs.L[j] / std::pow(static_cast<double>(k), cfg.chi);
        const double scale = gain * (cs.target[j] - proj);
        const double inv_k = 1.0 / static_cast<double>(k);
        for (int i = 0; i < J; ++i) {
            fit.alpha[i] += scale * e[i];
            fit.alpha_bar[i] += (fit.alpha[i] - fit.alpha_bar[i]) * inv_k;
        }
    }
    fit.itm_count = k;

    for (int i = 0; i < J; ++i) {
        if (!std::isfinite(fit.alpha[i]))
            throw SimulationError("SA coefficients diverged (non-finite iterate)", -1,
                                  static_cast<long>(k));
    }
    return fit;
}

std::vector<double> solve_weighted_least_squares(std::span<const double> design,
                                                 std::span<const double> weights,
                                                 std::span<const double> targets, int J) {
    const std::size_t n = weights.size();
    if (targets.size() != n || design.size() != n * static_cast<std::size_t>(J))
        throw ConfigError("solve_weighted_least_squares: shape mismatch");
    std::vector<double> A(static_cast<std::size_t>(J) * J, 0.0);
    std::vector<double> b(J, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double* e = design.data() + j * J;
        const double w = weights[j];
        for (int r = 0; r < J; ++r) {
            const double we = w * e[r];
            b[r] += we * targets[j];
            for (int c = r; c < J; ++c) A[r * J + c] += we * e[c];
        }
    }
    for (int r = 0; r < J; ++r)
        for (int c = 0; c < r; ++c) A[r * J + c] = A[c * J + r];

    // Cholesky; a non-positive pivot is exactly the ill-conditioning the SA
    // route avoids, so report it rather than regularize.
    std::vector<double> chol(A);
    double max_diag = 0.0;
    for (int i = 0; i < J; ++i) max_diag = std::max(max_diag, A[i * J + i]);
    for (int c = 0; c < J; ++c) {
        double diag = chol[c * J + c];
        for (int i = 0; i < c; ++i) diag -= chol[c * J + i] * chol[c * J + i];
        if (!(diag > max_diag * 1e-14))
            throw SimulationError("singular design matrix, pivot ratio " +
                                  std::to_string(diag / max_diag) + " at column " +
                                  std::to_string(c));
        const double root = std::sqrt(diag);
        chol[c * J + c] = root;
        for (int r = c + 1; r < J; ++r) {
            double v = chol[r * J + c];
            for (int i = 0; i < c; ++i) v -= chol[r * J + i] * chol[c * J + i];
            chol[r * J + c] = v / root;
        }
    }
    std::vector<double> x(b);
    for (int r = 0; r < J; ++r) {
        for (int i = 0; i < r; ++i) x[r] -= chol[r * J + i] * x[i];
        x[r] /= chol[r * J + r];
    }
    for (int r = J - 1; r >= 0; --r) {
        for (int i = r + 1; i < J; ++i) x[r] -= chol[i * J + r] * x[i];
        x[r] /= chol[r * J + r];
    }
    return x;
}

std::vector<double> ls_regression_oracle(const CrossSection& cs, const BasisSpec& basis) {
    const int J = basis.size();
    std::vector<double> design, weights, targets;
    std::vector<double> e(J);
    for (std::size_t j = 0; j < cs.size(); ++j) {
        if (!cs.in_the_money[j]) continue;
        basis_eval(basis, cs.S[j], cs.V[j], cs.R[j], e);
        design.insert(design.end(), e.begin(), e.end());
        weights.push_back(cs.L[j]);
        targets.push_back(cs.target[j]);
    }
    if (weights.empty()) throw SimulationError("ls_regression_oracle: no in-the-money entries");
    return solve_weighted_least_squares(design, weights, targets, J);
}

SAPriceResult sa_dp_price(const PathSet& paths, const PayoffSpec& payoff,
                          const BasisSpec& basis, const SAConfig& cfg) {
    cfg.validate();
    if (paths.count == 0) throw SimulationError("sa_dp_price: empty path set");
    if (payoff.steps != paths.steps)
        throw ConfigError("sa_dp_price: payoff maturity does not match the path length");

    const std::size_t N = paths.count;
    const int T = paths.steps;
    const int J = basis.size();

    SAPriceResult result;
    result.exercise_step.assign(N, T);
    std::vector<double> z_at_tau(N);
    for (std::size_t j = 0; j < N; ++j)
        z_at_tau[j] = payoff.value(T, paths.s(j, T), paths.r(j, T));

    CrossSection cs;
    cs.S.resize(N);
    cs.V.resize(N);
    cs.R.resize(N);
    cs.L.resize(N);
    cs.target.resize(N);
    cs.in_the_money.resize(N);

    std::vector<double> e(J);
    double residual_sum = 0.0;
    std::size_t residual_count = 0;

    for (int t = T - 1; t >= 0; --t) {
        if (t % cfg.exercise_every != 0) continue;

        std::size_t itm = 0;
        for (std::size_t j = 0; j < N; ++j) {
            const double z_now = payoff.value(t, paths.s(j, t), paths.r(j, t));
            cs.S[j] = paths.s(j, t);
            cs.V[j] = paths.v(j, t);
            cs.R[j] = paths.r(j, t);
            cs.L[j] = paths.l(j, t);
            cs.target[j] = z_at_tau[j];
            cs.in_the_money[j] = z_now > 0.0 ? 1 : 0;
            itm += cs.in_the_money[j];
        }

        SAFit fit = sa_fit_step(cs, basis, cfg);
        const std::vector<double>& projector = cfg.averaging ? fit.alpha_bar : fit.alpha;

        for (std::size_t j = 0; j < N; ++j) {
            if (!cs.in_the_money[j]) continue;
            basis_eval(basis, cs.S[j], cs.V[j], cs.R[j], e);
            double continuation = 0.0;
            for (int i = 0; i < J; ++i) continuation += e[i] * projector[i];
            const double z_now = payoff.value(t, paths.s(j, t), paths.r(j, t));
            residual_sum += (cs.target[j] - continuation) * (cs.target[j] - continuation);
            ++residual_count;
            if (z_now >= continuation) {
                result.exercise_step[j] = t;
                z_at_tau[j] = z_now;
            }
        }

        result.coeffs.times.push_back(t);
        result.coeffs.alpha.insert(result.coeffs.alpha.end(), fit.alpha.begin(),
                                   fit.alpha.end());
        result.coeffs.alpha_bar.insert(result.coeffs.alpha_bar.end(), fit.alpha_bar.begin(),
                                       fit.alpha_bar.end());
        result.coeffs.itm_count.push_back(itm);
    }

    // Stored backwards; flip to ascending time order.
    const std::size_t n_times = result.coeffs.times.size();
    AveragedCoefficients ordered;
    ordered.steps = T;
    ordered.J = J;
    ordered.times.resize(n_times);
    ordered.alpha.resize(n_times * J);
    ordered.alpha_bar.resize(n_times * J);
    ordered.itm_count.resize(n_times);
    for (std::size_t i = 0; i < n_times; ++i) {
        const std::size_t src = n_times - 1 - i;
        ordered.times[i] = result.coeffs.times[src];
        ordered.itm_count[i] = result.coeffs.itm_count[src];
        for (int q = 0; q < J; ++q) {
            ordered.alpha[i * J + q] = result.coeffs.alpha[src * J + q];
            ordered.alpha_bar[i * J + q] = result.coeffs.alpha_bar[src * J + q];
        }
    }
    result.coeffs = std::move(ordered);
    result.mean_sq_residual =
        residual_count > 0 ? residual_sum / static_cast<double>(residual_count) : 0.0;

    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        const double w = paths.l(j, result.exercise_step[j]);
        num += w * z_at_tau[j];
        den += w;
    }
    if (!(den > 0.0)) throw SimulationError("sa_dp_price: total weight at exercise is zero");
    result.price = num / den;
    return result;
}

}  // namespace hestonmc

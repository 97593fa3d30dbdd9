#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hestonmc/errors.hpp"
#include "hestonmc/experiment.hpp"
#include "hestonmc/reference.hpp"

namespace {

using namespace hestonmc;

struct CommonOpts {
    std::string config_path;
    std::string set_name;
    std::string out = "hestonmc_run";
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
    std::optional<int> reps;
    std::optional<int> threads;
    std::optional<std::size_t> n_particles;
    std::optional<int> m_steps;
    std::optional<int> big_m;
    std::optional<double> epsilon;
    std::optional<double> strike;
    std::optional<double> maturity;
    std::optional<std::string> resample;
    std::optional<double> r_param;
    std::optional<double> c_eff;
    std::optional<double> c_noneff;
    std::optional<double> true_price;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "JSON config file (see README for the schema)");
    cmd->add_option("--set", o.set_name, "built-in parameter set (PS1, PS2, PS3)");
    cmd->add_option("--seed", o.seed, "base RNG seed");
    cmd->add_option("--reps", o.reps, "independent repetitions");
    cmd->add_option("--out", o.out, "output file stem");
    cmd->add_option("--threads", o.threads, "worker threads");
    cmd->add_option("--format", o.format, "output format: csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    cmd->add_option("-N,--particles", o.n_particles, "particle count");
    cmd->add_option("-m,--steps-per-year", o.m_steps, "coarse steps per year");
    cmd->add_option("-M,--substeps", o.big_m, "volatility substeps per coarse step");
    cmd->add_option("--epsilon", o.epsilon, "variance stopping threshold");
    cmd->add_option("--strike", o.strike, "option strike");
    cmd->add_option("--maturity", o.maturity, "maturity in years");
    cmd->add_option("--resample", o.resample, "none, bootstrap, combined or effective");
    cmd->add_option("--branch-r", o.r_param, "combined-branching band parameter");
    cmd->add_option("--c-eff", o.c_eff, "effective-branching band at full effectiveness");
    cmd->add_option("--c-noneff", o.c_noneff, "effective-branching band at zero effectiveness");
    cmd->add_option("--true-price", o.true_price, "external ground-truth price");
}

ExperimentConfig build_config(const CommonOpts& o) {
    ExperimentConfig cfg;
    if (!o.config_path.empty()) {
        cfg = load_config(o.config_path);
    } else if (!o.set_name.empty()) {
        cfg = ExperimentConfig::from_set(o.set_name);
    }
    if (!o.set_name.empty() && !o.config_path.empty() && cfg.set_name != o.set_name)
        throw ConfigError("--set disagrees with the config file's parameter set");
    if (o.seed) cfg.seed = *o.seed;
    if (o.reps) cfg.reps = *o.reps;
    if (o.threads) cfg.threads = *o.threads;
    if (o.n_particles) cfg.N = *o.n_particles;
    if (o.m_steps) cfg.steps_per_year = *o.m_steps;
    if (o.big_m) cfg.M = *o.big_m;
    if (o.epsilon) cfg.epsilon = *o.epsilon;
    if (o.strike) cfg.strike = *o.strike;
    if (o.maturity) cfg.maturity_years = *o.maturity;
    if (o.resample) cfg.resample.kind = resample_kind_from_name(*o.resample);
    if (o.r_param) cfg.resample.r = *o.r_param;
    if (o.c_eff) cfg.resample.c_eff = *o.c_eff;
    if (o.c_noneff) cfg.resample.c_noneff = *o.c_noneff;
    if (o.true_price) cfg.true_price = *o.true_price;
    if (cfg.set_name == "custom" && !o.big_m && o.config_path.empty())
        std::cerr << "note: custom market parameters, using M=" << cfg.M
                  << " and epsilon=" << cfg.epsilon << " defaults\n";
    return cfg;
}

ReportFormat format_of(const CommonOpts& o) {
    return o.format == "jsonl" ? ReportFormat::json_lines : ReportFormat::csv;
}

void print_summary(const RunReport& report) {
    std::printf("set=%s payoff=%s N=%zu reps=%d seed=%llu\n", report.config.set_name.c_str(),
                payoff_kind_name(report.config.payoff_kind), report.config.N,
                report.config.reps,
                static_cast<unsigned long long>(report.config.seed));
    std::printf("mean price        %.10g\n", report.mean_price);
    if (report.has_reference) {
        std::printf("reference price   %.10g\n", report.reference_price);
        std::printf("relative RMSE     %.6g\n", report.rel_rmse);
    }
    std::printf("relative std      %.6g\n", report.rel_std);
    double wall = 0.0;
    for (double w : report.wall_seconds) wall += w;
    std::printf("total wall time   %.3fs\n", wall);
}

int run_pricing(const CommonOpts& o, PayoffKind kind, bool kind_fixed) {
    ExperimentConfig cfg = build_config(o);
    if (kind_fixed || cfg.payoff_kind == PayoffKind::european_straddle) cfg.payoff_kind = kind;
    RunReport report = run_experiment(cfg);
    emit_report(report, o.out, format_of(o));
    print_summary(report);
    return 0;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (!item.empty()) grid.push_back(std::stod(item));
    }
    return grid;
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Branching-particle Monte Carlo pricer for the Heston model"};
    app.require_subcommand(1);

    CommonOpts common;

    auto* cmd_eur = app.add_subcommand("price-european", "European straddle by weighted Monte Carlo");
    add_common(cmd_eur, common);

    auto* cmd_asi = app.add_subcommand("price-asian", "Asian straddle by weighted Monte Carlo");
    add_common(cmd_asi, common);

    auto* cmd_early =
        app.add_subcommand("price-early-exercise", "Early-exercise pricing via the SA/DP backward pass");
    std::string payoff_name = "asian_call_early";
    int early_J = 125;
    std::optional<double> early_gamma, early_chi;
    add_common(cmd_early, common);
    cmd_early->add_option("--payoff", payoff_name, "american_put or asian_call_early");
    cmd_early->add_option("-J,--basis-size", early_J, "total basis size (perfect power)");
    cmd_early->add_option("--gamma", early_gamma, "SA gain scale");
    cmd_early->add_option("--chi", early_chi, "SA gain decay exponent");

    auto* cmd_ref = app.add_subcommand("reference", "semi-analytic European call/put/straddle");
    double ref_tol = 1e-8;
    add_common(cmd_ref, common);
    cmd_ref->add_option("--tol", ref_tol, "absolute quadrature tolerance");

    auto* cmd_cal = app.add_subcommand("calibrate", "two-stage epsilon and branch-parameter search");
    std::string eps_grid_text, r_grid_text, ceff_grid_text, cnoneff_grid_text;
    add_common(cmd_cal, common);
    cmd_cal->add_option("--eps-grid", eps_grid_text, "comma-separated epsilon candidates")
        ->required();
    cmd_cal->add_option("--r-grid", r_grid_text, "comma-separated combined-branching r candidates");
    cmd_cal->add_option("--ceff-grid", ceff_grid_text, "comma-separated c_eff candidates");
    cmd_cal->add_option("--cnoneff-grid", cnoneff_grid_text, "comma-separated c_noneff candidates");

    auto* cmd_sa = app.add_subcommand("sa-search", "grid search for the SA gain pair");
    std::string gamma_grid_text, chi_grid_text;
    std::string sa_payoff_name = "asian_call_early";
    int sa_J = 125;
    add_common(cmd_sa, common);
    cmd_sa->add_option("--gamma-grid", gamma_grid_text, "comma-separated gamma candidates")
        ->required();
    cmd_sa->add_option("--chi-grid", chi_grid_text, "comma-separated chi candidates")->required();
    cmd_sa->add_option("--payoff", sa_payoff_name, "american_put or asian_call_early");
    cmd_sa->add_option("-J,--basis-size", sa_J, "total basis size (perfect power)");

    auto* cmd_truth = app.add_subcommand("ground-truth", "large-scale early-exercise price, cached");
    std::string cache_path = "ground_truth.json";
    std::string truth_payoff_name = "asian_call_early";
    int truth_J = 216;
    std::optional<double> truth_gamma, truth_chi;
    add_common(cmd_truth, common);
    cmd_truth->add_option("--cache", cache_path, "cache file for computed prices");
    cmd_truth->add_option("--payoff", truth_payoff_name, "american_put or asian_call_early");
    cmd_truth->add_option("-J,--basis-size", truth_J, "total basis size (perfect power)");
    cmd_truth->add_option("--gamma", truth_gamma, "SA gain scale");
    cmd_truth->add_option("--chi", truth_chi, "SA gain decay exponent");

    auto* cmd_rmse = app.add_subcommand("rmse-study", "relative RMSE across substep counts");
    std::string m_list_text = "2,4,6,8";
    add_common(cmd_rmse, common);
    cmd_rmse->add_option("--M-list", m_list_text, "comma-separated substep counts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_eur->parsed()) return run_pricing(common, PayoffKind::european_straddle, true);
        if (cmd_asi->parsed()) return run_pricing(common, PayoffKind::asian_straddle, true);

        if (cmd_early->parsed()) {
            ExperimentConfig cfg = build_config(common);
            cfg.payoff_kind = payoff_kind_from_name(payoff_name);
            cfg.J = early_J;
            if (!early_gamma || !early_chi) {
                const auto table = sa_defaults(cfg.set_name, cfg.J,
                                               cfg.resample.kind == ResampleKind::bootstrap);
                if (table) {
                    cfg.gamma = table->gamma;
                    cfg.chi = table->chi;
                }
            }
            if (early_gamma) cfg.gamma = *early_gamma;
            if (early_chi) cfg.chi = *early_chi;
            RunReport report = run_experiment(cfg);
            emit_report(report, common.out, format_of(common));
            print_summary(report);
            return 0;
        }

        if (cmd_ref->parsed()) {
            ExperimentConfig cfg = build_config(common);
            const EuropeanQuote quote =
                heston_call(cfg.market, cfg.strike, cfg.maturity_years, ref_tol);
            const auto consts =
                derive_constants(cfg.market, 1.0 / cfg.steps_per_year, cfg.M, cfg.epsilon);
            std::printf("set       %s\n", cfg.set_name.c_str());
            std::printf("call      %.12g\n", quote.call);
            std::printf("put       %.12g\n", quote.put);
            std::printf("straddle  %.12g\n", quote.straddle);
            std::printf("feller    %.6g (n = %d)\n", consts.feller, consts.n);
            std::printf("quadrature: %d evaluations, error estimate %.3g, truncated at %g\n",
                        quote.quad.evaluations, quote.quad.error_estimate,
                        quote.quad.truncation_bound);
            return 0;
        }

        if (cmd_cal->parsed()) {
            ExperimentConfig cfg = build_config(common);
            const std::vector<double> eps_grid = parse_grid(eps_grid_text);
            const std::vector<double> r_grid = parse_grid(r_grid_text);
            std::vector<std::pair<double, double>> c_grid;
            for (double ce : parse_grid(ceff_grid_text))
                for (double cn : parse_grid(cnoneff_grid_text)) c_grid.emplace_back(ce, cn);
            const CalibrationResult cal =
                calibrate_epsilon_and_branch(cfg, eps_grid, r_grid, c_grid);

            std::string body = "stage,param1,param2,objective\n";
            for (std::size_t i = 0; i < cal.epsilon_grid.size(); ++i)
                body += "epsilon," + fmt17(cal.epsilon_grid[i]) + ",," +
                        fmt17(cal.epsilon_objective[i]) + "\n";
            for (std::size_t i = 0; i < cal.r_grid.size(); ++i)
                body += "r," + fmt17(cal.r_grid[i]) + ",," + fmt17(cal.branch_objective[i]) + "\n";
            for (std::size_t i = 0; i < cal.c_grid.size(); ++i)
                body += "c," + fmt17(cal.c_grid[i].first) + "," + fmt17(cal.c_grid[i].second) +
                        "," + fmt17(cal.branch_objective[i]) + "\n";
            std::ofstream out(common.out + "_calibration.csv");
            out << body;

            std::printf("epsilon*  %.10g\n", cal.epsilon_best);
            if (!cal.r_grid.empty()) std::printf("r*        %.10g\n", cal.r_best);
            if (!cal.c_grid.empty())
                std::printf("c_eff*    %.10g  c_noneff* %.10g\n", cal.c_best.first,
                            cal.c_best.second);
            return 0;
        }

        if (cmd_sa->parsed()) {
            ExperimentConfig cfg = build_config(common);
            cfg.payoff_kind = payoff_kind_from_name(sa_payoff_name);
            cfg.J = sa_J;
            const SASearchResult res =
                sa_param_search(cfg, parse_grid(gamma_grid_text), parse_grid(chi_grid_text));
            std::string body = "gamma,chi,residual\n";
            std::size_t at = 0;
            for (double g : res.gamma_grid)
                for (double x : res.chi_grid)
                    body += fmt17(g) + "," + fmt17(x) + "," + fmt17(res.residuals[at++]) + "\n";
            std::ofstream out(common.out + "_sa_search.csv");
            out << body;
            std::printf("gamma*  %.10g\nchi*    %.10g\n", res.gamma_best, res.chi_best);
            return 0;
        }

        if (cmd_truth->parsed()) {
            ExperimentConfig cfg = build_config(common);
            cfg.payoff_kind = payoff_kind_from_name(truth_payoff_name);
            cfg.J = truth_J;
            if (!common.n_particles) cfg.N = 200000;
            if (cfg.resample.kind == ResampleKind::none && !common.resample)
                cfg.resample.kind = ResampleKind::effective;
            if (!truth_gamma || !truth_chi) {
                const auto table = sa_defaults(cfg.set_name, cfg.J,
                                               cfg.resample.kind == ResampleKind::bootstrap);
                if (table) {
                    cfg.gamma = table->gamma;
                    cfg.chi = table->chi;
                }
            }
            if (truth_gamma) cfg.gamma = *truth_gamma;
            if (truth_chi) cfg.chi = *truth_chi;

            const std::string key = cfg.set_name + "|" + payoff_kind_name(cfg.payoff_kind) +
                                    "|K=" + fmt17(cfg.strike) + "|T=" + fmt17(cfg.maturity_years) +
                                    "|N=" + std::to_string(cfg.N) + "|J=" +
                                    std::to_string(cfg.J) + "|resample=" +
                                    resample_kind_name(cfg.resample.kind) +
                                    "|seed=" + std::to_string(cfg.seed) +
                                    "|reps=" + std::to_string(cfg.reps);
            nlohmann::json cache = nlohmann::json::object();
            {
                std::ifstream in(cache_path);
                if (in) {
                    try {
                        in >> cache;
                    } catch (...) {
                        cache = nlohmann::json::object();
                    }
                }
            }
            if (cache.contains(key)) {
                std::printf("cached ground truth  %.10g\n", cache[key].get<double>());
                return 0;
            }
            RunReport report = run_experiment(cfg);
            cache[key] = report.mean_price;
            std::ofstream out(cache_path);
            out << cache.dump(2) << "\n";
            print_summary(report);
            std::printf("ground truth  %.10g (cached under %s)\n", report.mean_price,
                        cache_path.c_str());
            return 0;
        }

        if (cmd_rmse->parsed()) {
            ExperimentConfig base = build_config(common);
            std::string body = "M,reference_price,mean_price,rel_rmse,rel_std,mean_wall_s\n";
            for (double m_value : parse_grid(m_list_text)) {
                ExperimentConfig cfg = base;
                cfg.M = static_cast<int>(m_value);
                RunReport report = run_experiment(cfg);
                double wall = 0.0;
                for (double w : report.wall_seconds) wall += w;
                wall /= std::max<std::size_t>(1, report.wall_seconds.size());
                body += std::to_string(cfg.M) + "," + fmt17(report.reference_price) + "," +
                        fmt17(report.mean_price) + "," + fmt17(report.rel_rmse) + "," +
                        fmt17(report.rel_std) + "," + fmt17(wall) + "\n";
                std::printf("M=%d rel_rmse=%.6g rel_std=%.6g wall=%.3fs\n", cfg.M,
                            report.rel_rmse, report.rel_std, wall);
            }
            std::ofstream out(common.out + "_rmse_study.csv");
            out << body;
            return 0;
        }
    } catch (const ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const SimulationError& err) {
        std::cerr << "numerical abort: " << err.what() << "\n";
        return 3;
    }
    return 0;
}

#include "hestonmc/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hestonmc/errors.hpp"
#include "hestonmc/parallel.hpp"
#include "hestonmc/reference.hpp"
#include "hestonmc/simulate.hpp"

namespace hestonmc {

int ExperimentConfig::total_steps() const {
    const double steps = maturity_years * steps_per_year;
    const int rounded = static_cast<int>(std::lround(steps));
    if (rounded < 1) throw ConfigError("maturity must cover at least one step");
    return rounded;
}

PayoffSpec ExperimentConfig::payoff() const {
    return PayoffSpec{payoff_kind, strike, total_steps(), steps_per_year, market.mu};
}

SAConfig ExperimentConfig::sa_config() const {
    return SAConfig{gamma, chi, averaging, exercise_every};
}

void ExperimentConfig::validate() const {
    market.validate();
    if (N == 0) throw ConfigError("N must be positive");
    if (steps_per_year < 1) throw ConfigError("steps_per_year must be >= 1");
    if (!(maturity_years > 0.0)) throw ConfigError("maturity must be positive");
    if (!(strike > 0.0)) throw ConfigError("strike must be positive");
    if (reps < 0) throw ConfigError("reps must be >= 0");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    resample.validate();
    (void)total_steps();
    (void)derive_constants(market, 1.0 / steps_per_year, M, epsilon);
    if (payoff().early_exercise()) {
        sa_config().validate();
        const int vars = payoff().needs_running_average() ? 3 : 2;
        (void)BasisSpec::from_total(J, vars, strike);
    }
}

ExperimentConfig ExperimentConfig::from_set(const std::string& name) {
    ExperimentConfig cfg;
    const ParameterSet* ps = find_parameter_set(name);
    if (ps == nullptr) throw ConfigError("unknown parameter set: " + name);
    cfg.set_name = ps->name;
    cfg.market = ps->market;
    cfg.M = ps->M;
    cfg.steps_per_year = ps->steps_per_year;
    cfg.epsilon = ps->epsilon;
    cfg.stop_policy = ps->stop_policy;
    cfg.strike = ps->market.S0;
    cfg.resample.r = ps->r_t;
    cfg.resample.c_eff = ps->c_eff;
    cfg.resample.c_noneff = ps->c_noneff;
    return cfg;
}

namespace {

using nlohmann::json;

StopPolicy stop_policy_from_name(const std::string& name) {
    if (name == "freeze") return StopPolicy::freeze;
    if (name == "kill") return StopPolicy::kill;
    throw ConfigError("unknown stop policy: " + name);
}

const char* stop_policy_name(StopPolicy policy) {
    return policy == StopPolicy::freeze ? "freeze" : "kill";
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                ok = true;
                break;
            }
        }
        if (!ok) throw ConfigError("unknown config key '" + item.key() + "' in " + where);
    }
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("config is not valid JSON: ") + err.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be a JSON object");
    check_keys(root,
               {"set", "market", "N", "steps_per_year", "maturity_years", "M", "epsilon",
                "stop_policy", "exponent_cap", "resample", "payoff", "sa", "reps", "seed",
                "threads", "true_price"},
               "config root");

    ExperimentConfig cfg;
    if (root.contains("set")) cfg = ExperimentConfig::from_set(root["set"].get<std::string>());

    if (root.contains("market")) {
        const json& m = root["market"];
        check_keys(m, {"S0", "mu", "nu", "varrho", "kappa", "rho", "V0"}, "market");
        if (m.contains("S0")) cfg.market.S0 = m["S0"].get<double>();
        if (m.contains("mu")) cfg.market.mu = m["mu"].get<double>();
        if (m.contains("nu")) cfg.market.nu = m["nu"].get<double>();
        if (m.contains("varrho")) cfg.market.varrho = m["varrho"].get<double>();
        if (m.contains("kappa")) cfg.market.kappa = m["kappa"].get<double>();
        if (m.contains("rho")) cfg.market.rho = m["rho"].get<double>();
        if (m.contains("V0")) cfg.market.V0 = m["V0"].get<double>();
        if (!root.contains("set")) cfg.set_name = "custom";
    }
    if (root.contains("N")) cfg.N = root["N"].get<std::size_t>();
    if (root.contains("steps_per_year")) cfg.steps_per_year = root["steps_per_year"].get<int>();
    if (root.contains("maturity_years")) cfg.maturity_years = root["maturity_years"].get<double>();
    if (root.contains("M")) cfg.M = root["M"].get<int>();
    if (root.contains("epsilon")) cfg.epsilon = root["epsilon"].get<double>();
    if (root.contains("stop_policy"))
        cfg.stop_policy = stop_policy_from_name(root["stop_policy"].get<std::string>());
    if (root.contains("exponent_cap")) cfg.exponent_cap = root["exponent_cap"].get<double>();

    if (root.contains("resample")) {
        const json& r = root["resample"];
        check_keys(r, {"mode", "r", "c_eff", "c_noneff", "every"}, "resample");
        if (r.contains("mode"))
            cfg.resample.kind = resample_kind_from_name(r["mode"].get<std::string>());
        if (r.contains("r")) cfg.resample.r = r["r"].get<double>();
        if (r.contains("c_eff")) cfg.resample.c_eff = r["c_eff"].get<double>();
        if (r.contains("c_noneff")) cfg.resample.c_noneff = r["c_noneff"].get<double>();
        if (r.contains("every")) cfg.resample.every = r["every"].get<int>();
    }
    if (root.contains("payoff")) {
        const json& p = root["payoff"];
        check_keys(p, {"kind", "strike"}, "payoff");
        if (p.contains("kind"))
            cfg.payoff_kind = payoff_kind_from_name(p["kind"].get<std::string>());
        if (p.contains("strike")) cfg.strike = p["strike"].get<double>();
    }
    bool explicit_gain = false;
    if (root.contains("sa")) {
        const json& s = root["sa"];
        check_keys(s, {"J", "gamma", "chi", "averaging", "exercise_every"}, "sa");
        if (s.contains("J")) cfg.J = s["J"].get<int>();
        if (s.contains("gamma")) {
            cfg.gamma = s["gamma"].get<double>();
            explicit_gain = true;
        }
        if (s.contains("chi")) {
            cfg.chi = s["chi"].get<double>();
            explicit_gain = true;
        }
        if (s.contains("averaging")) cfg.averaging = s["averaging"].get<bool>();
        if (s.contains("exercise_every")) cfg.exercise_every = s["exercise_every"].get<int>();
    }
    if (root.contains("reps")) cfg.reps = root["reps"].get<int>();
    if (root.contains("seed")) cfg.seed = root["seed"].get<std::uint64_t>();
    if (root.contains("threads")) cfg.threads = root["threads"].get<int>();
    if (root.contains("true_price")) cfg.true_price = root["true_price"].get<double>();

    if (!explicit_gain) {
        const auto table = sa_defaults(cfg.set_name, cfg.J,
                                       cfg.resample.kind == ResampleKind::bootstrap);
        if (table.has_value()) {
            cfg.gamma = table->gamma;
            cfg.chi = table->chi;
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json root;
    root["set"] = cfg.set_name;
    root["market"] = {{"S0", cfg.market.S0},       {"mu", cfg.market.mu},
                      {"nu", cfg.market.nu},       {"varrho", cfg.market.varrho},
                      {"kappa", cfg.market.kappa}, {"rho", cfg.market.rho},
                      {"V0", cfg.market.V0}};
    root["N"] = cfg.N;
    root["steps_per_year"] = cfg.steps_per_year;
    root["maturity_years"] = cfg.maturity_years;
    root["M"] = cfg.M;
    root["epsilon"] = cfg.epsilon;
    root["stop_policy"] = stop_policy_name(cfg.stop_policy);
    root["exponent_cap"] = cfg.exponent_cap;
    root["resample"] = {{"mode", resample_kind_name(cfg.resample.kind)},
                        {"r", cfg.resample.r},
                        {"c_eff", cfg.resample.c_eff},
                        {"c_noneff", cfg.resample.c_noneff},
                        {"every", cfg.resample.every}};
    root["payoff"] = {{"kind", payoff_kind_name(cfg.payoff_kind)}, {"strike", cfg.strike}};
    root["sa"] = {{"J", cfg.J},
                  {"gamma", cfg.gamma},
                  {"chi", cfg.chi},
                  {"averaging", cfg.averaging},
                  {"exercise_every", cfg.exercise_every}};
    root["reps"] = cfg.reps;
    root["seed"] = cfg.seed;
    root["threads"] = cfg.threads;
    if (cfg.true_price.has_value()) root["true_price"] = *cfg.true_price;
    return root.dump(2);
}

namespace {

struct SimOutcome {
    ParticleSystem system;
    std::vector<StepStats> diagnostics;
};

SimOutcome simulate_paths(const ExperimentConfig& cfg, std::uint64_t rep_seed,
                          bool collect_diagnostics, int evolve_threads, bool need_history) {
    DerivedConstants consts =
        derive_constants(cfg.market, 1.0 / cfg.steps_per_year, cfg.M, cfg.epsilon);
    consts.stop_policy = cfg.stop_policy;
    consts.exponent_cap = cfg.exponent_cap;

    SimOutcome out;
    out.system = init_system(cfg.market, consts, cfg.N, need_history);
    const int steps = cfg.total_steps();
    if (collect_diagnostics) out.diagnostics.reserve(steps);

    for (int t = 1; t <= steps; ++t) {
        const StepDiagnostics diag = evolve_step(out.system, consts, rep_seed, evolve_threads);
        StepStats stats;
        stats.step = diag.step;
        stats.count = diag.count;
        stats.mean_L = diag.mean_L;
        stats.min_V = diag.min_V;
        stats.n_eff = diag.n_eff;
        stats.stopped_count = diag.stopped_count;
        const auto report = resample_step(out.system, cfg.resample, rep_seed);
        if (report.has_value()) {
            stats.count = report->count_after;
            stats.branch_A = report->A;
            stats.branch_r = report->r;
            stats.branched_fraction = report->branched_fraction;
        }
        if (collect_diagnostics) out.diagnostics.push_back(stats);
    }
    return out;
}

}  // namespace

SingleRunResult run_single(const ExperimentConfig& cfg, std::uint64_t rep_seed,
                           bool collect_diagnostics, int evolve_threads) {
    const auto start = std::chrono::steady_clock::now();
    const PayoffSpec payoff = cfg.payoff();
    SimOutcome sim = simulate_paths(cfg, rep_seed, collect_diagnostics, evolve_threads,
                                    payoff.early_exercise());
    const ParticleSystem& sys = sim.system;
    const int T = payoff.steps;

    SingleRunResult result;
    result.diagnostics = std::move(sim.diagnostics);
    result.final_count = sys.count();

    double sum_l = 0.0, sum_ls = 0.0;
    for (std::size_t j = 0; j < sys.count(); ++j) {
        sum_l += sys.L[j];
        sum_ls += sys.L[j] * sys.S[j];
    }
    if (!(sum_l > 0.0))
        throw SimulationError("terminal weight sum is zero", sys.step);
    result.sum_L = sum_l;
    result.weighted_S = sum_ls / sum_l;

    if (payoff.early_exercise()) {
        const PathSet paths = reconstruct_paths(sys);
        const int vars = payoff.needs_running_average() ? 3 : 2;
        const BasisSpec basis = BasisSpec::from_total(cfg.J, vars, cfg.strike);
        result.price = sa_dp_price(paths, payoff, basis, cfg.sa_config()).price;
    } else {
        double num = 0.0;
        for (std::size_t j = 0; j < sys.count(); ++j) {
            num += sys.L[j] * payoff.value(T, sys.S[j], sys.R[j]);
        }
        result.price = num / sum_l;
    }

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::uint64_t repetition_seed(std::uint64_t base_seed, int rep) {
    return rng::splitmix64(base_seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(rep) + 1));
}

RunReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    RunReport report;
    report.config = cfg;
    report.rep_seeds.resize(cfg.reps);
    report.prices.resize(cfg.reps);
    report.wall_seconds.resize(cfg.reps);
    for (int i = 0; i < cfg.reps; ++i) report.rep_seeds[i] = repetition_seed(cfg.seed, i);

    if (cfg.payoff_kind == PayoffKind::european_straddle) {
        report.reference_price = heston_call(cfg.market, cfg.strike, cfg.maturity_years).straddle;
        report.has_reference = true;
    }
    if (cfg.true_price.has_value()) {
        report.reference_price = *cfg.true_price;
        report.has_reference = true;
    }

    const int rep_threads = cfg.reps > 1 ? cfg.threads : 1;
    const int evolve_threads = cfg.reps > 1 ? 1 : cfg.threads;
    std::vector<StepStats> diag0;
    parallel_for(static_cast<std::size_t>(cfg.reps), rep_threads, [&](std::size_t i) {
        try {
            SingleRunResult res =
                run_single(cfg, report.rep_seeds[i], i == 0, evolve_threads);
            report.prices[i] = res.price;
            report.wall_seconds[i] = res.wall_seconds;
            if (i == 0) diag0 = std::move(res.diagnostics);
        } catch (const SimulationError& err) {
            throw SimulationError("repetition " + std::to_string(i) + " (seed " +
                                      std::to_string(report.rep_seeds[i]) +
                                      ") aborted: " + err.what(),
                                  err.step(), err.particle());
        }
    });
    report.diagnostics = std::move(diag0);

    if (cfg.reps > 0) {
        double mean = 0.0;
        for (double p : report.prices) mean += p;
        mean /= cfg.reps;
        report.mean_price = mean;
        double sq_dev = 0.0, sq_err = 0.0;
        for (double p : report.prices) {
            sq_dev += (p - mean) * (p - mean);
            if (report.has_reference)
                sq_err += (p - report.reference_price) * (p - report.reference_price);
        }
        const double denom = report.has_reference ? report.reference_price : mean;
        report.rel_std =
            cfg.reps > 1 ? std::sqrt(sq_dev / (cfg.reps - 1)) / denom : 0.0;
        report.rel_rmse =
            report.has_reference ? std::sqrt(sq_err / cfg.reps) / report.reference_price : 0.0;
    }
    return report;
}

namespace {

void write_or_throw(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << body;
    if (!out) throw ConfigError("failed while writing: " + path);
}

std::string resample_label(const ResampleMode& mode) {
    std::string label = resample_kind_name(mode.kind);
    if (mode.kind == ResampleKind::combined) label += "(r=" + fmt17(mode.r) + ")";
    if (mode.kind == ResampleKind::effective)
        label += "(c_eff=" + fmt17(mode.c_eff) + ";c_noneff=" + fmt17(mode.c_noneff) + ")";
    return label;
}

}  // namespace

void emit_report(const RunReport& report, const std::string& stem, ReportFormat format) {
    const bool csv = format == ReportFormat::csv;
    const std::string ref = report.has_reference ? fmt17(report.reference_price) : "";

    std::string reps;
    if (csv) {
        reps = "rep,seed,price,reference_price,abs_error\n";
        for (std::size_t i = 0; i < report.prices.size(); ++i) {
            reps += std::to_string(i) + "," + std::to_string(report.rep_seeds[i]) + "," +
                    fmt17(report.prices[i]) + "," + ref + ",";
            if (report.has_reference)
                reps += fmt17(std::fabs(report.prices[i] - report.reference_price));
            reps += "\n";
        }
    } else {
        for (std::size_t i = 0; i < report.prices.size(); ++i) {
            reps += "{\"rep\":" + std::to_string(i) +
                    ",\"seed\":" + std::to_string(report.rep_seeds[i]) +
                    ",\"price\":" + fmt17(report.prices[i]);
            if (report.has_reference)
                reps += ",\"reference_price\":" + ref + ",\"abs_error\":" +
                        fmt17(std::fabs(report.prices[i] - report.reference_price));
            reps += "}\n";
        }
    }

    const ExperimentConfig& cfg = report.config;
    std::string summary;
    if (csv) {
        summary =
            "set,payoff,N,steps_per_year,maturity_years,M,epsilon,resample,reps,seed,"
            "reference_price,mean_price,rel_rmse,rel_std\n";
        summary += cfg.set_name + "," + payoff_kind_name(cfg.payoff_kind) + "," +
                   std::to_string(cfg.N) + "," + std::to_string(cfg.steps_per_year) + "," +
                   fmt17(cfg.maturity_years) + "," + std::to_string(cfg.M) + "," +
                   fmt17(cfg.epsilon) + "," + resample_label(cfg.resample) + "," +
                   std::to_string(cfg.reps) + "," + std::to_string(cfg.seed) + "," + ref + "," +
                   fmt17(report.mean_price) + "," +
                   (report.has_reference ? fmt17(report.rel_rmse) : "") + "," +
                   fmt17(report.rel_std) + "\n";
    } else {
        summary = "{\"set\":\"" + cfg.set_name + "\",\"payoff\":\"" +
                  payoff_kind_name(cfg.payoff_kind) + "\",\"N\":" + std::to_string(cfg.N) +
                  ",\"steps_per_year\":" + std::to_string(cfg.steps_per_year) +
                  ",\"maturity_years\":" + fmt17(cfg.maturity_years) +
                  ",\"M\":" + std::to_string(cfg.M) + ",\"epsilon\":" + fmt17(cfg.epsilon) +
                  ",\"resample\":\"" + resample_label(cfg.resample) +
                  "\",\"reps\":" + std::to_string(cfg.reps) +
                  ",\"seed\":" + std::to_string(cfg.seed);
        if (report.has_reference) summary += ",\"reference_price\":" + ref;
        summary += ",\"mean_price\":" + fmt17(report.mean_price);
        if (report.has_reference) summary += ",\"rel_rmse\":" + fmt17(report.rel_rmse);
        summary += ",\"rel_std\":" + fmt17(report.rel_std) + "}\n";
    }

    std::string steps;
    if (csv) {
        steps = "step,count,stopped,mean_L,min_V,n_eff,branch_A,branch_r,branched_fraction\n";
        for (const StepStats& s : report.diagnostics) {
            steps += std::to_string(s.step) + "," + std::to_string(s.count) + "," +
                     std::to_string(s.stopped_count) + "," + fmt17(s.mean_L) + "," +
                     fmt17(s.min_V) + "," + fmt17(s.n_eff) + "," + fmt17(s.branch_A) + "," +
                     fmt17(s.branch_r) + "," + fmt17(s.branched_fraction) + "\n";
        }
    } else {
        for (const StepStats& s : report.diagnostics) {
            steps += "{\"step\":" + std::to_string(s.step) +
                     ",\"count\":" + std::to_string(s.count) +
                     ",\"stopped\":" + std::to_string(s.stopped_count) +
                     ",\"mean_L\":" + fmt17(s.mean_L) + ",\"min_V\":" + fmt17(s.min_V) +
                     ",\"n_eff\":" + fmt17(s.n_eff) + ",\"branch_A\":" + fmt17(s.branch_A) +
                     ",\"branch_r\":" + fmt17(s.branch_r) +
                     ",\"branched_fraction\":" + fmt17(s.branched_fraction) + "}\n";
        }
    }

    const char* ext = csv ? ".csv" : ".jsonl";
    write_or_throw(stem + "_reps" + ext, reps);
    write_or_throw(stem + "_summary" + ext, summary);
    write_or_throw(stem + "_steps" + ext, steps);

    // Wall-clock timings are hardware noise, so they live outside the
    // deterministic report files.
    std::string timing = "# wall seconds per repetition (non-deterministic)\n";
    for (std::size_t i = 0; i < report.wall_seconds.size(); ++i) {
        timing += std::to_string(i) + " " + fmt17(report.wall_seconds[i]) + "\n";
    }
    write_or_throw(stem + "_timing.txt", timing);
}

CalibrationResult calibrate_epsilon_and_branch(
    const ExperimentConfig& cfg, const std::vector<double>& epsilon_grid,
    const std::vector<double>& r_grid, const std::vector<std::pair<double, double>>& c_grid) {
    if (epsilon_grid.empty()) throw ConfigError("calibration epsilon grid is empty");
    if (r_grid.empty() && c_grid.empty())
        throw ConfigError("calibration branch-parameter grid is empty");

    CalibrationResult result;
    result.epsilon_grid = epsilon_grid;
    const std::uint64_t seed = repetition_seed(cfg.seed, 0);

    // Step 1: epsilon against E[L_T] = 1, with no resampling and common
    // random numbers across the grid.
    double best = std::numeric_limits<double>::infinity();
    for (double eps : epsilon_grid) {
        ExperimentConfig probe = cfg;
        probe.epsilon = eps;
        probe.resample = ResampleMode::none_mode();
        const SingleRunResult run = run_single(probe, seed, false, cfg.threads);
        const double objective =
            std::fabs(run.sum_L / static_cast<double>(run.final_count) - 1.0);
        result.epsilon_objective.push_back(objective);
        if (objective < best) {
            best = objective;
            result.epsilon_best = eps;
        }
    }

    // Step 2: branch parameter against the terminal weighted-price identity.
    const double target = cfg.market.S0 * std::exp(cfg.market.mu * cfg.maturity_years);
    const bool combined = !r_grid.empty();
    result.r_grid = r_grid;
    result.c_grid = c_grid;
    best = std::numeric_limits<double>::infinity();
    const std::size_t n_points = combined ? r_grid.size() : c_grid.size();
    for (std::size_t i = 0; i < n_points; ++i) {
        ExperimentConfig probe = cfg;
        probe.epsilon = result.epsilon_best;
        if (combined) {
            probe.resample = ResampleMode::combined(r_grid[i]);
        } else {
            probe.resample = ResampleMode::effective(c_grid[i].first, c_grid[i].second);
        }
        const SingleRunResult run = run_single(probe, seed, false, cfg.threads);
        const double objective =
            std::fabs(run.weighted_S * run.sum_L -
                      static_cast<double>(run.final_count) * target) /
            run.sum_L;
        result.branch_objective.push_back(objective);
        if (objective < best) {
            best = objective;
            if (combined) {
                result.r_best = r_grid[i];
            } else {
                result.c_best = c_grid[i];
            }
        }
    }
    return result;
}

SASearchResult sa_param_search(const ExperimentConfig& cfg,
                               const std::vector<double>& gamma_grid,
                               const std::vector<double>& chi_grid) {
    if (gamma_grid.empty() || chi_grid.empty()) throw ConfigError("SA search grid is empty");
    const PayoffSpec payoff = cfg.payoff();
    if (!payoff.early_exercise())
        throw ConfigError("SA parameter search needs an early-exercise payoff");

    SimOutcome sim =
        simulate_paths(cfg, repetition_seed(cfg.seed, 0), false, cfg.threads, true);
    const PathSet paths = reconstruct_paths(sim.system);
    const int vars = payoff.needs_running_average() ? 3 : 2;
    const BasisSpec basis = BasisSpec::from_total(cfg.J, vars, cfg.strike);

    SASearchResult result;
    result.gamma_grid = gamma_grid;
    result.chi_grid = chi_grid;
    double best = std::numeric_limits<double>::infinity();
    for (double gamma : gamma_grid) {
        for (double chi : chi_grid) {
            SAConfig sa{gamma, chi, cfg.averaging, cfg.exercise_every};
            const double residual = sa_dp_price(paths, payoff, basis, sa).mean_sq_residual;
            result.residuals.push_back(residual);
            if (residual < best) {
                best = residual;
                result.gamma_best = gamma;
                result.chi_best = chi;
            }
        }
    }
    return result;
}

}  // namespace hestonmc

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hestonmc/params.hpp"
#include "hestonmc/payoff.hpp"
#include "hestonmc/resample.hpp"
#include "hestonmc/sa.hpp"

namespace hestonmc {

// One fully specified pricing experiment: market + simulation + resampling +
// payoff + SA settings + repetition plan.
struct ExperimentConfig {
    std::string set_name = "custom";  // "PS1".."PS3" or "custom"
    HestonParams market;
    std::size_t N = 100000;
    int steps_per_year = 50;          // m
    double maturity_years = 1.0;      // T
    int M = 6;
    double epsilon = 1e-5;
    StopPolicy stop_policy = StopPolicy::freeze;
    double exponent_cap = 700.0;
    ResampleMode resample;
    PayoffKind payoff_kind = PayoffKind::european_straddle;
    double strike = 100.0;
    int J = 27;
    double gamma = 1.0;
    double chi = 0.1;
    bool averaging = true;
    int exercise_every = 1;
    int reps = 1;
    std::uint64_t seed = 1;
    int threads = 1;
    std::optional<double> true_price;  // external ground truth, when known

    int total_steps() const;
    PayoffSpec payoff() const;
    SAConfig sa_config() const;
    void validate() const;

    // Preset loader: market and simulation fields from the named set, with
    // SA gains filled from the published table when available.
    static ExperimentConfig from_set(const std::string& name);
};

// Config file IO (JSON; schema documented in the README). Unknown keys are
// rejected so typos fail loudly.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& cfg);

// One line of the per-step diagnostics stream.
struct StepStats {
    int step = 0;
    std::size_t count = 0;
    double mean_L = 0.0;
    double min_V = 0.0;
    double n_eff = 0.0;
    double branch_A = 0.0;
    double branch_r = 0.0;
    double branched_fraction = 0.0;
    std::size_t stopped_count = 0;
};

// Result of one seeded repetition.
struct SingleRunResult {
    double price = 0.0;
    double sum_L = 0.0;       // terminal weight sum
    double weighted_S = 0.0;  // terminal sum(L S)/sum(L)
    std::size_t final_count = 0;
    std::vector<StepStats> diagnostics;
    double wall_seconds = 0.0;
};

// Simulate, resample and price once under the given repetition seed.
SingleRunResult run_single(const ExperimentConfig& cfg, std::uint64_t rep_seed,
                           bool collect_diagnostics, int evolve_threads = 1);

// Aggregate over cfg.reps independent repetitions.
struct RunReport {
    ExperimentConfig config;
    std::vector<std::uint64_t> rep_seeds;
    std::vector<double> prices;
    std::vector<double> wall_seconds;       // timing sidecar, not in the CSVs
    std::vector<StepStats> diagnostics;     // from the first repetition
    double reference_price = 0.0;           // 0 when unavailable
    bool has_reference = false;
    double mean_price = 0.0;
    double rel_rmse = 0.0;                  // vs reference, when available
    double rel_std = 0.0;                   // vs reference, when available
};

std::uint64_t repetition_seed(std::uint64_t base_seed, int rep);

RunReport run_experiment(const ExperimentConfig& cfg);

enum class ReportFormat { csv, json_lines };

// Writes <stem>_reps.(csv|jsonl), <stem>_summary.(csv|jsonl),
// <stem>_steps.(csv|jsonl) and the non-deterministic <stem>_timing.txt.
// Floats carry 17 significant digits; field order is fixed.
void emit_report(const RunReport& report, const std::string& stem, ReportFormat format);

// Two-stage calibration on common random numbers: first epsilon against
// E[L_T] = 1 without resampling, then the branch parameter against the
// weighted terminal price identity.
struct CalibrationResult {
    double epsilon_best = 0.0;
    std::vector<double> epsilon_grid;
    std::vector<double> epsilon_objective;
    // step 2, combined: r grid; effective: (c_eff, c_noneff) pairs
    std::vector<double> r_grid;
    std::vector<std::pair<double, double>> c_grid;
    std::vector<double> branch_objective;
    double r_best = 0.0;
    std::pair<double, double> c_best{0.0, 0.0};
};

CalibrationResult calibrate_epsilon_and_branch(const ExperimentConfig& cfg,
                                               const std::vector<double>& epsilon_grid,
                                               const std::vector<double>& r_grid,
                                               const std::vector<std::pair<double, double>>& c_grid);

// Grid search for the SA gain pair on a fixed simulated path set; returns
// the residual-minimizing pair and the full residual table.
struct SASearchResult {
    double gamma_best = 0.0;
    double chi_best = 0.0;
    std::vector<double> gamma_grid;
    std::vector<double> chi_grid;
    std::vector<double> residuals;  // [gamma][chi] row-major
};

SASearchResult sa_param_search(const ExperimentConfig& cfg,
                               const std::vector<double>& gamma_grid,
                               const std::vector<double>& chi_grid);

}  // namespace hestonmc

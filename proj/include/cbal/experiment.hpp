#ifndef CBAL_EXPERIMENT_HPP
#define CBAL_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cbal/simulator.hpp"

namespace cbal {

struct ExperimentConfig {
    TrialConfig trial;                        // method field is ignored here
    int n_trials = 1;
    std::vector<Method> methods = {Method::Ep};
    std::string out_dir;                      // empty: nothing written
    int workers = 0;                          // OpenMP threads; 0 = runtime default
};

void validate_experiment_config(const ExperimentConfig& cfg);

/// Per-method aggregate over completed trials.
struct MethodCurve {
    Method method = Method::Ep;
    std::vector<double> mean_error;  // one entry per flop
    double alpha_sim = 0.0;          // mean over completed trials
    int completed = 0;
    int aborted = 0;
};

struct AggregateResult {
    ExperimentConfig cfg;
    std::vector<std::vector<TrialRecord>> records;  // [method][trial]
    std::vector<MethodCurve> curves;
    bool incomplete = false;   // >5% of trials aborted for some method
    std::uint64_t config_hash = 0;
    double wall_seconds = 0.0;  // in-memory metadata only, never serialized
};

/// Canonical key=value rendering of the configuration (config.txt body).
std::string render_config(const ExperimentConfig& cfg);

std::uint64_t config_hash(const ExperimentConfig& cfg);

/// Runs n_trials seeded trials per method (trial i uses the counter-split
/// stream of (seed, i), identical across methods) and aggregates mean error
/// curves and alpha_sim. Trials run in parallel; aggregation is a sequential
/// reduction by trial index, so results match the serial reference exactly.
/// Writes outputs when cfg.out_dir is set.
AggregateResult run_experiment(const ExperimentConfig& cfg);

/// Single-threaded reference implementation with identical results.
AggregateResult run_experiment_serial(const ExperimentConfig& cfg);

/// Writes trials.csv, summary.csv and config.txt into dir. Output bytes are a
/// pure function of (config, seed).
void write_outputs(const AggregateResult& res, const std::string& dir);

}  // namespace cbal

#endif

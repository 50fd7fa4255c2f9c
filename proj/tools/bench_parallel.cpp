// Benchmark comparing the OpenMP trial runner and polytope sampler against
// their serial references, verifying identical results along the way.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "cbal/experiment.hpp"
#include "cbal/oracle.hpp"

using namespace cbal;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    const int trials = argc > 1 ? std::atoi(argv[1]) : 32;

    ExperimentConfig cfg;
    cfg.trial.n_sus = 5;
    cfg.trial.n_flops = 60;
    cfg.trial.alpha = 0.7;
    cfg.trial.min_distance_m = 500.0;
    cfg.trial.alpha_floor = 0.05;
    cfg.trial.seed = 42;
    cfg.n_trials = trials;

    std::printf("trial runner: %d EP trials, N=5, 60 flops\n", trials);
    auto t0 = std::chrono::steady_clock::now();
    const AggregateResult serial = run_experiment_serial(cfg);
    const double t_serial = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const AggregateResult parallel = run_experiment(cfg);
    const double t_parallel = seconds_since(t0);

    bool same = serial.curves[0].alpha_sim == parallel.curves[0].alpha_sim;
    for (std::size_t f = 0; same && f < serial.curves[0].mean_error.size(); ++f)
        same = serial.curves[0].mean_error[f] == parallel.curves[0].mean_error[f];
    std::printf("  serial   %7.2fs\n  parallel %7.2fs  speedup %.2fx  results %s\n", t_serial,
                t_parallel, t_serial / t_parallel, same ? "identical" : "DIFFER");

    PolytopePosterior poly{{Eigen::VectorXd::Zero(5), Eigen::VectorXd::Constant(5, 1.0)},
                           {{Eigen::VectorXd::Constant(5, 1.0), 0.4}}};
    const std::size_t n = 400000;
    std::printf("polytope sampler: %zu samples, N=5, one cut\n", n);
    SampleOptions serial_opts;
    serial_opts.parallel = false;
    t0 = std::chrono::steady_clock::now();
    const Eigen::MatrixXd a = rejection_sample(poly, n, RngStream(7), serial_opts);
    const double s_serial = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const Eigen::MatrixXd b = rejection_sample(poly, n, RngStream(7));
    const double s_parallel = seconds_since(t0);
    std::printf("  serial   %7.2fs\n  parallel %7.2fs  speedup %.2fx  results %s\n", s_serial,
                s_parallel, s_serial / s_parallel, a == b ? "identical" : "DIFFER");

    return same && a == b ? 0 : 1;
}

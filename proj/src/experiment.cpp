#include "cbal/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cbal/errors.hpp"

namespace cbal {

void validate_experiment_config(const ExperimentConfig& cfg) {
    validate_trial_config(cfg.trial);
    if (cfg.n_trials < 1) throw DomainError("experiment: need at least one trial");
    if (cfg.methods.empty()) throw DomainError("experiment: no methods selected");
}

namespace {

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void aggregate(AggregateResult& res) {
    res.curves.clear();
    res.incomplete = false;
    const int n_flops = res.cfg.trial.n_flops;
    for (std::size_t m = 0; m < res.cfg.methods.size(); ++m) {
        MethodCurve curve;
        curve.method = res.cfg.methods[m];
        curve.mean_error.assign(n_flops, 0.0);
        double alpha_sum = 0.0;
        for (const auto& rec : res.records[m]) {
            if (rec.aborted || static_cast<int>(rec.rows.size()) != n_flops) {
                ++curve.aborted;
                continue;
            }
            ++curve.completed;
            alpha_sum += rec.alpha_sim;
            for (int f = 0; f < n_flops; ++f) curve.mean_error[f] += rec.rows[f].error;
        }
        if (curve.completed > 0) {
            for (double& e : curve.mean_error) e /= curve.completed;
            curve.alpha_sim = alpha_sum / curve.completed;
        }
        if (curve.aborted * 20 > res.cfg.n_trials) res.incomplete = true;
        res.curves.push_back(std::move(curve));
    }
}

// A trial that dies on an unexpected numerical error is recorded as aborted
// rather than tearing down the batch (exceptions must not cross the OpenMP
// region boundary).
TrialRecord guarded_trial(const TrialConfig& cfg, const RngStream& stream) {
    try {
        return run_trial(cfg, stream);
    } catch (const std::exception& e) {
        TrialRecord rec;
        rec.aborted = true;
        rec.abort_reason = e.what();
        return rec;
    }
}

AggregateResult run_impl(const ExperimentConfig& cfg, bool parallel) {
    validate_experiment_config(cfg);
    const auto start = std::chrono::steady_clock::now();

    AggregateResult res;
    res.cfg = cfg;
    res.config_hash = config_hash(cfg);
    res.records.assign(cfg.methods.size(), std::vector<TrialRecord>(cfg.n_trials));

    const RngStream base(cfg.trial.seed);
    const auto tasks = static_cast<std::ptrdiff_t>(cfg.methods.size()) * cfg.n_trials;

    if (parallel) {
#ifdef _OPENMP
        if (cfg.workers > 0) omp_set_num_threads(cfg.workers);
#endif
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t task = 0; task < tasks; ++task) {
            const auto m = static_cast<std::size_t>(task / cfg.n_trials);
            const auto i = static_cast<int>(task % cfg.n_trials);
            TrialConfig tc = cfg.trial;
            tc.method = cfg.methods[m];
            res.records[m][i] = guarded_trial(tc, base.split(static_cast<std::uint64_t>(i)));
        }
    } else {
        for (std::ptrdiff_t task = 0; task < tasks; ++task) {
            const auto m = static_cast<std::size_t>(task / cfg.n_trials);
            const auto i = static_cast<int>(task % cfg.n_trials);
            TrialConfig tc = cfg.trial;
            tc.method = cfg.methods[m];
            res.records[m][i] = guarded_trial(tc, base.split(static_cast<std::uint64_t>(i)));
        }
    }

    aggregate(res);
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!cfg.out_dir.empty()) write_outputs(res, cfg.out_dir);
    return res;
}

}  // namespace

AggregateResult run_experiment(const ExperimentConfig& cfg) {
    return run_impl(cfg, true);
}

AggregateResult run_experiment_serial(const ExperimentConfig& cfg) {
    return run_impl(cfg, false);
}

std::string render_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "sus=" << cfg.trial.n_sus << "\n";
    os << "range_m=" << fmt12(cfg.trial.range_m) << "\n";
    os << "dmin_m=" << fmt12(cfg.trial.min_distance_m) << "\n";
    os << "ith_dbm=" << fmt12(cfg.trial.i_th_dbm) << "\n";
    os << "alpha=" << fmt12(cfg.trial.alpha) << "\n";
    os << "flops=" << cfg.trial.n_flops << "\n";
    os << "seed=" << cfg.trial.seed << "\n";
    os << "sweeps=" << cfg.trial.ep_sweeps << "\n";
    os << "nr=" << cfg.trial.n_samples << "\n";
    os << "alpha_floor=" << fmt12(cfg.trial.alpha_floor) << "\n";
    os << "alpha_ceil=" << fmt12(cfg.trial.alpha_ceil) << "\n";
    os << "trials=" << cfg.n_trials << "\n";
    std::string methods;
    for (const auto m : cfg.methods) {
        if (!methods.empty()) methods += ",";
        methods += method_name(m);
    }
    os << "method=" << methods << "\n";
    return os.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    // FNV-1a over the canonical rendering.
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : render_config(cfg)) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void write_outputs(const AggregateResult& res, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());

    const auto open = [](const std::string& path) {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot open " + path + " for writing");
        return f;
    };

    {
        auto f = open(dir + "/trials.csv");
        f << "trial,flop,method,z,alpha_k,error,cum_ack_ratio\n";
        for (std::size_t m = 0; m < res.cfg.methods.size(); ++m) {
            const std::string name = method_name(res.cfg.methods[m]);
            for (std::size_t i = 0; i < res.records[m].size(); ++i) {
                for (const auto& row : res.records[m][i].rows) {
                    f << i << ',' << row.flop << ',' << name << ',' << row.z << ','
                      << fmt12(row.alpha_k) << ',' << fmt12(row.error) << ','
                      << fmt12(row.cum_ack_ratio) << '\n';
                }
            }
        }
        if (!f.good()) throw IoError("write failed: " + dir + "/trials.csv");
    }

    {
        auto f = open(dir + "/summary.csv");
        f << "method,flop,mean_error\n";
        for (const auto& curve : res.curves) {
            const std::string name = method_name(curve.method);
            for (std::size_t flop = 0; flop < curve.mean_error.size(); ++flop)
                f << name << ',' << flop << ',' << fmt12(curve.mean_error[flop]) << '\n';
        }
        f << "method,alpha_sim\n";
        for (const auto& curve : res.curves)
            f << method_name(curve.method) << ',' << fmt12(curve.alpha_sim) << '\n';
        if (!f.good()) throw IoError("write failed: " + dir + "/summary.csv");
    }

    {
        auto f = open(dir + "/config.txt");
        f << render_config(res.cfg);
        f << "config_hash=" << res.config_hash << "\n";
        for (const auto& curve : res.curves) {
            f << "completed_" << method_name(curve.method) << "=" << curve.completed << "\n";
            f << "aborted_" << method_name(curve.method) << "=" << curve.aborted << "\n";
        }
        f << "incomplete=" << (res.incomplete ? 1 : 0) << "\n";
        if (!f.good()) throw IoError("write failed: " + dir + "/config.txt");
    }
}

}  // namespace cbal

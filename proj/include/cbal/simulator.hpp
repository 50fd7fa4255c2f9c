#ifndef CBAL_SIMULATOR_HPP
#define CBAL_SIMULATOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cbal/ep.hpp"
#include "cbal/rng.hpp"

namespace cbal {

/// One random deployment: SU distances from the PU receiver, the implied
/// interference channel gains g = 1/d^4 and their threshold-normalized form
/// h* = g / I_th (per milliwatt).
struct Topology {
    Eigen::VectorXd distances;  // meters
    Eigen::VectorXd gains;      // linear power gains
    Eigen::VectorXd h_star;     // gains / i_th_mw
    double i_th_mw = 0.0;       // interference threshold, milliwatts
};

enum class Method { Ep, McmcOracle };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct TrialConfig {
    int n_sus = 5;                 // number of secondary users (N)
    double range_m = 3000.0;       // deployment radius around the PU receiver
    double min_distance_m = 1.0;   // distance floor; also sets the prior box
    double i_th_dbm = -97.0;       // interference threshold in dBm
    double alpha = 0.5;            // designed protection time ratio
    int n_flops = 100;             // probing horizon N_T
    std::uint64_t seed = 1;
    Method method = Method::Ep;
    int ep_sweeps = 5;
    std::size_t n_samples = 20000;  // mcmc-oracle samples per flop
    double alpha_floor = 0.5;
    double alpha_ceil = 1.0 - 1e-6;
};

void validate_trial_config(const TrialConfig& cfg);

/// dBm to milliwatts.
double dbm_to_mw(double dbm);

/// Prior support box implied by the deployment floor: [0, h_max]^N with
/// h_max = (1/d_min^4) / I_th, so h* always lies inside.
PriorBox prior_box_for(const TrialConfig& cfg);

/// Distances drawn uniformly over the disk of radius range_m (radial
/// inversion), clamped below at min_distance_m.
Topology generate_topology(const TrialConfig& cfg, RngStream& rng);

/// ACK/NACK feedback: +1 iff h*·p <= 1 (equivalently g·p <= I_th).
int feedback(const Topology& topo, const Eigen::VectorXd& p);

/// Normalized root-square error ||h_hat - h_star|| / ||h_star||.
double estimation_error(const Eigen::VectorXd& h_hat, const Eigen::VectorXd& h_star);

/// Fraction of +1 entries.
double protection_ratio(const std::vector<int>& zs);

struct FlopRecord {
    int flop = 0;
    Eigen::VectorXd p;
    int z = 0;
    double alpha_k = 0.0;
    Eigen::VectorXd h_hat;     // estimate after absorbing this flop's feedback
    double error = 0.0;        // with estimate clamped at zero
    double error_raw = 0.0;    // unclamped estimate
    double cum_ack_ratio = 0.0;
    double cdf_check = 0.0;    // achieved probe cdf at design time
};

struct TrialRecord {
    Topology topology;
    std::vector<FlopRecord> rows;
    double alpha_sim = 0.0;  // over the recorded flops
    bool aborted = false;
    std::string abort_reason;
};

/// Full probe -> feedback -> update loop for one topology. Deterministic
/// given the stream; a probe-design failure aborts the trial and flags the
/// partial record.
TrialRecord run_trial(const TrialConfig& cfg, RngStream rng);

}  // namespace cbal

#endif

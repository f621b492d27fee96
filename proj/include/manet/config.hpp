#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "manet/elections.hpp"
#include "manet/mobility.hpp"
#include "manet/radio.hpp"
#include "manet/tracking.hpp"

namespace manet {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scripted attacker behaviour. Entries are assigned to attackers round-robin
// by attacker index.
struct AttackerAction {
    double start_t = 30.0;
    std::string behavior;   // drop_packets | forge_key | replay_tod | hide
    double ratio = 0.9;     // drop_packets
    double offset_ns = 170; // replay_tod: stale-stamp inflation
    int sector = 1;         // hide
};

struct TrackerConfig {
    double r1_m = 10.0;
    int n_contours = 10;
    double half_angle_deg = 45.0;
    bool adaptive_r1 = false;
};

enum class ExecMode { Serial, Parallel };

struct ScenarioConfig {
    Bounds bounds{700.0, 700.0};
    int clusters = 7;
    int nodes_per_cluster = 80;
    double transmission_range_m = 300.0;
    double duration_s = 600.0;
    double speed_min_mps = 1.0;
    double speed_max_mps = 20.0;
    std::uint64_t seed = 1;

    double attacker_fraction = 0.1;
    std::vector<AttackerAction> attacker_script = {
        {30.0, "forge_key", 0.9, 170.0, 1},
        {30.0, "replay_tod", 0.9, 170.0, 1},
    };

    CriteriaWeights ocf_weights = CriteriaWeights::ocf_default();
    CriteriaWeights bcf_weights = CriteriaWeights::bcf_default();

    double trust_threshold = 0.5;
    double range_accept_threshold_m = 2.0;
    double bcf_threshold = 0.8;
    double elect_trust_min = 0.8;

    TrackerConfig tracker;

    double timestamp_noise_ns = 5.0;
    double aoa_noise_deg = 1.0;
    double propagation_speed_mps = 3.0e8;
    double path_exponent = 2.0;

    double election_epoch_s = 30.0;
    double detection_interval_s = 10.0;
    double mobility_window_s = 10.0;
    int cluster_size_hops = 4;
    int packets_per_reading = 3;
    int max_range_retries = 5;
    double residual_threshold_m = 10.0;
    double energy_drain_per_s = 2e-5;

    ExecMode exec = ExecMode::Parallel;

    // Throws ConfigError on any violated invariant.
    void validate() const;

    RadioModel radio() const;
    PltParams plt_params() const;

    // 2 clusters x 20 nodes over 60 s; used by CI-scale runs.
    static ScenarioConfig small_preset();
};

// Parse a JSON document. Unknown keys are rejected. Missing keys keep their
// defaults. The result is validated before returning.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);

std::string config_to_json(const ScenarioConfig& cfg);

}  // namespace manet

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "manet/geometry.hpp"
#include "manet/localization.hpp"
#include "manet/mobility.hpp"

namespace manet {

// Forward tracking zone: a cone of equal-area energy contours anchored at the
// latest known position, pointed along the heading implied by the previous
// two positions. Contour radii grow as r1 * sqrt(k), which makes every
// annulus cover the same area as the innermost disc.
struct TrackingZone {
    Position apex;
    double heading_deg = 0.0;
    double half_angle_deg = 45.0;
    double r1 = 10.0;
    int n_contours = 10;
    std::vector<double> radii;  // radii[k-1] = r1 * sqrt(k)

    double outer_radius() const { return radii.back(); }
    // Midpoint of band k's radial extent (band 1 spans [0, r1]).
    double band_mid(int k) const;
    bool bearing_in_cone(double bearing) const {
        return std::abs(ang_diff_deg(bearing, heading_deg)) <= half_angle_deg;
    }
};

// Bearing of (p_curr - p_prev) in [0, 360). Throws on coincident points; the
// tracker handles that case by coasting on its previous heading.
double predict_heading(const Position& p_prev, const Position& p_curr);

TrackingZone build_zone(const Position& p_prev, const Position& p_curr, double r1,
                        int n_contours, double half_angle_deg);

// Invert the received-energy law d = (tx/rx)^(1/exponent) * d_ref and map the
// distance into a contour band: returns k with r_{k-1} < d <= r_k, or nullopt
// when the target lies beyond the outermost contour. Throws on rx <= 0.
std::optional<int> contour_index(const TrackingZone& zone, double received_energy,
                                 double tx_energy, double path_exponent, double d_ref = 1.0);

enum class TrackStatus { Locked, Coasting, Lost };

const char* track_status_name(TrackStatus s);

struct PltParams {
    double r1 = 10.0;
    int n_contours = 10;
    double half_angle_deg = 45.0;
    bool adaptive_r1 = false;  // size r1 to the last observed step length
    double d_ref = 1.0;
    double path_exponent = 2.0;
    int max_coast_epochs = 3;
};

struct TrackerState {
    int target_id = -1;
    TimedPosition prev;
    TimedPosition curr;
    TrackingZone zone;
    TrackStatus status = TrackStatus::Locked;
    int coast_count = 0;
    std::vector<TimedPosition> history;
    PltParams params;
};

// Seed a tracker from two time-ordered position fixes.
TrackerState make_tracker(int target_id, const TimedPosition& p_prev, const TimedPosition& p_curr,
                          const PltParams& params);

// Re-seed after a fresh localization fix (initial lock or re-acquisition).
void reseed_tracker(TrackerState& state, const TimedPosition& p_prev, const TimedPosition& p_curr);

struct PltStepResult {
    std::optional<PositionEstimate> estimate;  // present only when Locked
    TrackStatus status = TrackStatus::Lost;
};

// One tracking step from a beam observation. A bearing outside the cone
// coasts (widening the cone one half-angle step, up to 90 degrees, for at
// most max_coast_epochs); a target beyond the outermost contour is Lost and
// the caller re-acquires with a full localization fix.
PltStepResult plt_step(TrackerState& state, double t, double beam_bearing_deg,
                       std::optional<int> contour_k);

// CSV row for the tracking trace.
struct TrackRow {
    double t = 0.0;
    int observer_id = -1;
    int target_id = -1;
    Position estimate;
    Position truth;
    double error_m = 0.0;
    TrackStatus status = TrackStatus::Locked;
};

std::string track_csv_header();
std::string to_csv(const TrackRow& row);

}  // namespace manet

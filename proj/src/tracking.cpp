#include "manet/tracking.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace manet {

double TrackingZone::band_mid(int k) const {
    double inner = k >= 2 ? radii[static_cast<std::size_t>(k) - 2] : 0.0;
    double outer = radii[static_cast<std::size_t>(k) - 1];
    return 0.5 * (inner + outer);
}

double predict_heading(const Position& p_prev, const Position& p_curr) {
    if (p_prev.x == p_curr.x && p_prev.y == p_curr.y) {
        throw std::invalid_argument("predict_heading: coincident positions");
    }
    return bearing_deg(p_prev, p_curr);
}

TrackingZone build_zone(const Position& p_prev, const Position& p_curr, double r1,
                        int n_contours, double half_angle_deg) {
    if (r1 <= 0.0) throw std::invalid_argument("build_zone: r1 must be > 0");
    if (n_contours < 1) throw std::invalid_argument("build_zone: n_contours must be >= 1");
    if (half_angle_deg <= 0.0 || half_angle_deg > 90.0) {
        throw std::invalid_argument("build_zone: half_angle must be in (0, 90]");
    }
    TrackingZone zone;
    zone.apex = p_curr;
    zone.heading_deg = predict_heading(p_prev, p_curr);
    zone.half_angle_deg = half_angle_deg;
    zone.r1 = r1;
    zone.n_contours = n_contours;
    zone.radii.resize(static_cast<std::size_t>(n_contours));
    for (int k = 1; k <= n_contours; ++k) {
        zone.radii[static_cast<std::size_t>(k) - 1] = r1 * std::sqrt(static_cast<double>(k));
    }
    return zone;
}

std::optional<int> contour_index(const TrackingZone& zone, double received_energy,
                                 double tx_energy, double path_exponent, double d_ref) {
    if (received_energy <= 0.0) throw std::invalid_argument("contour_index: received energy <= 0");
    if (tx_energy <= 0.0) throw std::invalid_argument("contour_index: tx energy <= 0");
    double d = std::pow(tx_energy / received_energy, 1.0 / path_exponent) * d_ref;
    if (d > zone.outer_radius()) return std::nullopt;
    for (int k = 1; k <= zone.n_contours; ++k) {
        if (d <= zone.radii[static_cast<std::size_t>(k) - 1]) return k;
    }
    return std::nullopt;
}

const char* track_status_name(TrackStatus s) {
    switch (s) {
        case TrackStatus::Locked: return "locked";
        case TrackStatus::Coasting: return "coasting";
        case TrackStatus::Lost: return "lost";
    }
    return "?";
}

namespace {

double effective_r1(const PltParams& params, const Position& prev, const Position& curr) {
    if (!params.adaptive_r1) return params.r1;
    double step = distance(prev, curr);
    return step > 1e-9 ? step : params.r1;
}

}  // namespace

TrackerState make_tracker(int target_id, const TimedPosition& p_prev, const TimedPosition& p_curr,
                          const PltParams& params) {
    if (p_curr.t < p_prev.t) throw std::invalid_argument("make_tracker: fixes out of order");
    TrackerState state;
    state.target_id = target_id;
    state.prev = p_prev;
    state.curr = p_curr;
    state.params = params;
    state.zone = build_zone(p_prev.p, p_curr.p, effective_r1(params, p_prev.p, p_curr.p),
                            params.n_contours, params.half_angle_deg);
    state.status = TrackStatus::Locked;
    state.coast_count = 0;
    return state;
}

void reseed_tracker(TrackerState& state, const TimedPosition& p_prev, const TimedPosition& p_curr) {
    state.prev = p_prev;
    state.curr = p_curr;
    state.zone = build_zone(p_prev.p, p_curr.p,
                            effective_r1(state.params, p_prev.p, p_curr.p),
                            state.params.n_contours, state.params.half_angle_deg);
    state.status = TrackStatus::Locked;
    state.coast_count = 0;
}

PltStepResult plt_step(TrackerState& state, double t, double beam_bearing_deg,
                       std::optional<int> contour_k) {
    if (state.zone.radii.empty()) throw std::logic_error("plt_step: tracker has no zone");

    if (!contour_k.has_value()) {
        state.status = TrackStatus::Lost;
        return {std::nullopt, TrackStatus::Lost};
    }
    int k = *contour_k;
    if (k < 1 || k > state.zone.n_contours) {
        throw std::invalid_argument("plt_step: contour index out of range");
    }

    if (!state.zone.bearing_in_cone(beam_bearing_deg)) {
        state.coast_count += 1;
        if (state.coast_count > state.params.max_coast_epochs) {
            state.status = TrackStatus::Lost;
            return {std::nullopt, TrackStatus::Lost};
        }
        // widen by one half-angle step, capped at a half plane
        state.zone.half_angle_deg =
            std::min(90.0, state.zone.half_angle_deg + state.params.half_angle_deg);
        state.status = TrackStatus::Coasting;
        return {std::nullopt, TrackStatus::Coasting};
    }

    double radius = state.zone.band_mid(k);
    double beta = deg_to_rad(beam_bearing_deg);
    Position est = state.zone.apex + Vec3{std::cos(beta), std::sin(beta), 0.0} * radius;

    TimedPosition fix{t, est};
    state.prev = state.curr;
    state.curr = fix;
    state.history.push_back(fix);
    state.coast_count = 0;
    state.status = TrackStatus::Locked;
    if (distance(state.prev.p, state.curr.p) > 1e-9) {
        state.zone = build_zone(state.prev.p, state.curr.p,
                                effective_r1(state.params, state.prev.p, state.curr.p),
                                state.params.n_contours, state.params.half_angle_deg);
    } else {
        // no displacement: keep the previous heading, move the apex
        state.zone.apex = est;
    }

    PositionEstimate pe{est, 0.0, Method::Triangulation, t, 0};
    return {pe, TrackStatus::Locked};
}

std::string track_csv_header() {
    return "t,observer_id,target_id,est_x,est_y,true_x,true_y,error_m,status";
}

std::string to_csv(const TrackRow& row) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.3f,%d,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%s", row.t,
                  row.observer_id, row.target_id, row.estimate.x, row.estimate.y, row.truth.x,
                  row.truth.y, row.error_m, track_status_name(row.status));
    return buf;
}

}  // namespace manet

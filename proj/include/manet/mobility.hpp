#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "manet/geometry.hpp"
#include "manet/node.hpp"
#include "manet/rng.hpp"

namespace manet {

struct Bounds {
    double width = 700.0;
    double height = 700.0;

    bool contains(const Position& p) const {
        return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
    }
};

inline Position random_point(const Bounds& b, Rng& rng) {
    double x = rng.uniform(0.0, b.width);
    double y = rng.uniform(0.0, b.height);
    return {x, y, 0.0};
}

// Random waypoint step with zero pause time: move toward the waypoint at
// `speed`; when it is reached mid-step, draw a fresh waypoint and speed and
// spend the remaining time on the new leg.
inline void advance_waypoint(NodeState& node, double dt, const Bounds& bounds, Rng& rng,
                             double v_min, double v_max) {
    if (dt < 0.0) throw std::invalid_argument("advance_waypoint: dt must be >= 0");
    double remaining = dt;
    while (remaining > 0.0) {
        Vec3 leg = node.waypoint - node.position;
        double leg_len = leg.norm();
        if (leg_len < 1e-12) {
            node.waypoint = random_point(bounds, rng);
            node.speed = rng.uniform(v_min, v_max);
            continue;
        }
        double step = node.speed * remaining;
        if (step >= leg_len) {
            node.position = node.waypoint;
            remaining -= leg_len / node.speed;
        } else {
            node.position = node.position + leg * (step / leg_len);
            remaining = 0.0;
        }
    }
}

struct TimedPosition {
    double t = 0.0;
    Position p;
};

// Time-stamped position history. Samples are appended in time order.
class Trajectory {
public:
    void add(double t, const Position& p) {
        if (!samples_.empty() && t < samples_.back().t) {
            throw std::invalid_argument("trajectory samples must be time-ordered");
        }
        samples_.push_back({t, p});
    }

    const std::vector<TimedPosition>& samples() const { return samples_; }
    bool empty() const { return samples_.empty(); }
    const TimedPosition& back() const { return samples_.back(); }

    // Samples with t in [t_from, t_to], inclusive.
    std::vector<TimedPosition> window(double t_from, double t_to) const {
        std::vector<TimedPosition> out;
        for (const auto& s : samples_) {
            if (s.t >= t_from && s.t <= t_to) out.push_back(s);
        }
        return out;
    }

private:
    std::vector<TimedPosition> samples_;
};

// |d(t2) - d(t1)| / (t2 - t1) over the window [t_now - window, t_now], where
// d is the inter-node distance and t1/t2 are the earliest/latest times both
// trajectories have samples for. Lower values mean a more stable pair.
inline double relative_mobility(const Trajectory& a, const Trajectory& b, double t_now,
                                double window) {
    auto wa = a.window(t_now - window, t_now);
    auto wb = b.window(t_now - window, t_now);
    if (wa.size() < 2 || wb.size() < 2) {
        throw std::invalid_argument("relative_mobility: need >= 2 samples per node in window");
    }
    double t1 = std::max(wa.front().t, wb.front().t);
    double t2 = std::min(wa.back().t, wb.back().t);
    if (t2 <= t1) throw std::invalid_argument("relative_mobility: no common time span in window");

    auto at = [](const std::vector<TimedPosition>& w, double t) -> Position {
        // linear interpolation between bracketing samples
        for (std::size_t i = 1; i < w.size(); ++i) {
            if (w[i].t >= t) {
                const auto& lo = w[i - 1];
                const auto& hi = w[i];
                if (hi.t == lo.t) return hi.p;
                double u = (t - lo.t) / (hi.t - lo.t);
                return lo.p + (hi.p - lo.p) * u;
            }
        }
        return w.back().p;
    };

    double d1 = distance(at(wa, t1), at(wb, t1));
    double d2 = distance(at(wa, t2), at(wb, t2));
    return std::abs(d2 - d1) / (t2 - t1);
}

}  // namespace manet

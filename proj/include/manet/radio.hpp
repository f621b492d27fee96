#pragma once

#include <stdexcept>
#include <vector>

#include "manet/geometry.hpp"
#include "manet/rng.hpp"

namespace manet {

// Idealized radio timing channel. Propagation is straight-line at a fixed
// speed; the receiver's arrival stamps carry additive Gaussian jitter, the
// sender's departure stamps are exact.
struct RadioModel {
    double propagation_speed = 3.0e8;    // m/s
    double timestamp_noise_sigma = 0.0;  // seconds, on each ToA reading
    double transmission_range = 300.0;   // meters
    double path_exponent = 2.0;          // received-energy law, free space

    void validate() const {
        if (propagation_speed <= 0.0) throw std::invalid_argument("propagation_speed must be > 0");
        if (transmission_range <= 0.0) throw std::invalid_argument("transmission_range must be > 0");
        if (timestamp_noise_sigma < 0.0) throw std::invalid_argument("timestamp_noise_sigma must be >= 0");
        if (path_exponent <= 0.0) throw std::invalid_argument("path_exponent must be > 0");
    }
};

// Exact one-way propagation time |a-b| / speed.
inline double propagation_time(const Position& a, const Position& b, const RadioModel& radio) {
    return distance(a, b) / radio.propagation_speed;
}

struct PacketPair {
    double tod = 0.0;  // seconds, sender clock
    double toa = 0.0;  // seconds, receiver clock
};

// One burst of `n` management packets from `sender` to `receiver`.
// ToD stamps are exact; each ToA gets its own noise sample.
inline std::vector<PacketPair> simulate_packet_burst(const Position& sender,
                                                     const Position& receiver,
                                                     const RadioModel& radio, int n,
                                                     double t0, Rng& rng) {
    if (n < 1) throw std::invalid_argument("packet burst needs n >= 1");
    const double flight = propagation_time(sender, receiver, radio);
    std::vector<PacketPair> pairs;
    pairs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double tod = t0 + 1e-4 * i;  // packet spacing, value irrelevant to ranging
        double noise = radio.timestamp_noise_sigma > 0.0 ? rng.gauss(radio.timestamp_noise_sigma) : 0.0;
        pairs.push_back({tod, tod + flight + noise});
    }
    return pairs;
}

inline bool in_range(const Position& a, const Position& b, const RadioModel& radio) {
    return distance(a, b) <= radio.transmission_range;
}

}  // namespace manet

#pragma once

#include <array>
#include <span>
#include <string>

#include "manet/geometry.hpp"
#include "manet/radio.hpp"
#include "manet/rng.hpp"

namespace manet {

struct RangeReading {
    double meters = 0.0;
    bool clamped = false;  // set when the noisy mean came out negative
};

// Distance from a batch of (ToD, ToA) stamps: speed * mean(ToA_i - ToD_i).
// A negative mean (possible under noise) clamps to zero and sets the flag.
RangeReading range_from_packets(std::span<const PacketPair> pairs, double speed);

enum class AcceptStatus { Accepted, PartialAccept, Rejected };

const char* accept_status_name(AcceptStatus s);

struct AcceptedRange {
    AcceptStatus status = AcceptStatus::Rejected;
    double distance = 0.0;  // meaningful unless Rejected
};

// Consistency check over three repeated readings for one reference-target
// pair. All three within `threshold` of their mean: accept the mean. Else the
// tightest pair within `threshold` of the pair mean: accept that pair's mean.
// Else reject; the caller re-measures.
AcceptedRange accept_range(const std::array<double, 3>& readings, double threshold = 2.0);

// True bearing from ref to target plus Gaussian noise, wrapped to [0, 360).
// Throws when the target is out of transmission range.
double measure_aoa(const Position& ref, const Position& target, const RadioModel& radio,
                   double noise_deg, Rng& rng);

// CSV row for the measurement log.
struct MeasurementRow {
    double t = 0.0;
    int reference_id = -1;
    int target_id = -1;
    std::array<double, 3> readings{};
    AcceptStatus status = AcceptStatus::Rejected;
    double final_distance = 0.0;
    double aoa_deg = 0.0;
};

std::string measurement_csv_header();
std::string to_csv(const MeasurementRow& row);

}  // namespace manet

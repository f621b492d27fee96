#include "manet/ranging.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace manet {

RangeReading range_from_packets(std::span<const PacketPair> pairs, double speed) {
    if (pairs.empty()) throw std::invalid_argument("range_from_packets: empty packet batch");
    double sum = 0.0;
    for (const auto& p : pairs) sum += p.toa - p.tod;
    double mean = sum / static_cast<double>(pairs.size());
    double d = speed * mean;
    if (d < 0.0) return {0.0, true};
    return {d, false};
}

const char* accept_status_name(AcceptStatus s) {
    switch (s) {
        case AcceptStatus::Accepted: return "accepted";
        case AcceptStatus::PartialAccept: return "partial";
        case AcceptStatus::Rejected: return "rejected";
    }
    return "?";
}

AcceptedRange accept_range(const std::array<double, 3>& r, double threshold) {
    double mean3 = (r[0] + r[1] + r[2]) / 3.0;
    double dev = std::max({std::abs(r[0] - mean3), std::abs(r[1] - mean3), std::abs(r[2] - mean3)});
    if (dev <= threshold) return {AcceptStatus::Accepted, mean3};

    // Tightest pair whose members sit within threshold of the pair mean,
    // i.e. |ri - rj| <= 2 * threshold.
    static constexpr int kPairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    int best = -1;
    double best_gap = 0.0;
    for (int i = 0; i < 3; ++i) {
        double gap = std::abs(r[kPairs[i][0]] - r[kPairs[i][1]]);
        if (gap <= 2.0 * threshold && (best < 0 || gap < best_gap)) {
            best = i;
            best_gap = gap;
        }
    }
    if (best >= 0) {
        double pair_mean = (r[kPairs[best][0]] + r[kPairs[best][1]]) / 2.0;
        return {AcceptStatus::PartialAccept, pair_mean};
    }
    return {AcceptStatus::Rejected, 0.0};
}

double measure_aoa(const Position& ref, const Position& target, const RadioModel& radio,
                   double noise_deg, Rng& rng) {
    if (!in_range(ref, target, radio)) {
        throw std::invalid_argument("measure_aoa: target out of transmission range");
    }
    double b = bearing_deg(ref, target);
    if (noise_deg > 0.0) b += rng.gauss(noise_deg);
    return norm_deg(b);
}

std::string measurement_csv_header() {
    return "t,reference_id,target_id,reading1,reading2,reading3,status,final_distance,aoa";
}

std::string to_csv(const MeasurementRow& row) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.3f,%d,%d,%.6f,%.6f,%.6f,%s,%.6f,%.4f", row.t,
                  row.reference_id, row.target_id, row.readings[0], row.readings[1],
                  row.readings[2], accept_status_name(row.status), row.final_distance,
                  row.aoa_deg);
    return buf;
}

}  // namespace manet

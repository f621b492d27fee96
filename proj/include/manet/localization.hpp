#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "manet/geometry.hpp"
#include "manet/node.hpp"
#include "manet/ranging.hpp"

namespace manet {

struct ReferenceFix {
    Position position;
    double distance = 0.0;                // meters, from ranging
    std::optional<double> aoa_deg;        // bearing ref -> target, when measured
};

enum class Method { Triangulation, Multilateration };

const char* method_name(Method m);

struct PositionEstimate {
    Position position;
    double residual = 0.0;  // RMS of | ||p - ref_i|| - d_i |
    Method method = Method::Triangulation;
    double epoch = 0.0;     // seconds
    int n_fixes = 0;
};

// RMS range residual of candidate point p against the fixes.
double rms_range_residual(const Position& p, std::span<const ReferenceFix> fixes);

// Index of the fix with the largest absolute range misfit at p.
std::size_t worst_fix_index(const Position& p, std::span<const ReferenceFix> fixes);

// Position from exactly three references: linearized init, Gauss-Newton
// refinement, mirror disambiguation (AoA when present, else residual, else
// proximity to the reference centroid). Throws on collinear references or a
// non-converging solve.
PositionEstimate triangulate(std::span<const ReferenceFix> fixes);

// Position from four or more references via anchor-subtracted linear least
// squares plus Gauss-Newton refinement. Solves in-plane when all references
// share one z. Throws on degenerate geometry or fewer than four fixes.
PositionEstimate multilaterate(std::span<const ReferenceFix> fixes);

struct DerivedDistance {
    double meters = 0.0;
    bool clamped = false;
};

// Diagnostic via-origin distance: speed * (T_mn + T_mC - T_Cn), where the T
// terms are mean one-way propagation times through a common origin node.
// The combination does not reduce to the Euclidean sender-receiver distance
// for general geometry; direct per-pair ranging feeds multilaterate instead.
DerivedDistance derive_distance_via_origin(double t_mn, double t_mc, double t_cn, double speed);

struct LocalizeParams {
    int k_neighbors = 4;
    double accept_threshold_m = 2.0;
    double residual_threshold_m = 10.0;
    int max_range_retries = 5;
};

// Three repeat readings (meters) for one reference-target pair; attempt is the
// re-measurement counter so retries draw fresh noise.
using RangeSampler =
    std::function<std::array<double, 3>(const NodeState& reference, int target_id, int attempt)>;

// Localize a flagged node from its authenticated neighbors: pick the
// k nearest to the last known position (ties by lower id; the target itself is
// never a reference), range each with the repeat-consistency rule, then
// multilaterate. A residual above the threshold swaps the worst-fitting
// neighbor for the next nearest unused one and re-solves.
PositionEstimate localize_malicious(std::span<const NodeState* const> authenticated,
                                    int target_id, const Position& last_known,
                                    const RangeSampler& sampler, const LocalizeParams& params,
                                    double epoch);

// CSV row for the estimate log.
struct EstimateRow {
    double t = 0.0;
    int target_id = -1;
    Method method = Method::Triangulation;
    Position position;
    double residual = 0.0;
    int n_fixes = 0;
};

std::string estimate_csv_header();
std::string to_csv(const EstimateRow& row);

}  // namespace manet

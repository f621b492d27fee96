#include "manet/localization.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace manet {

namespace {

constexpr double kCollinearEps = 1e-6;   // m^2, spec precondition
constexpr double kStepTol = 1e-9;        // m, Gauss-Newton stop
constexpr int kMaxIterations = 50;

// Gauss-Newton refinement of p against the range equations. `planar` pins z.
Position gauss_newton(Position p, std::span<const ReferenceFix> fixes, bool planar) {
    const int dim = planar ? 2 : 3;
    for (int it = 0; it < kMaxIterations; ++it) {
        Eigen::MatrixXd jac(fixes.size(), dim);
        Eigen::VectorXd res(fixes.size());
        for (std::size_t i = 0; i < fixes.size(); ++i) {
            Vec3 d = p - fixes[i].position;
            double r = d.norm();
            if (r < 1e-12) {
                // sitting on a reference: direction undefined, zero row
                for (int c = 0; c < dim; ++c) jac(static_cast<int>(i), c) = 0.0;
                res(static_cast<int>(i)) = -fixes[i].distance;
                continue;
            }
            jac(static_cast<int>(i), 0) = d.x / r;
            jac(static_cast<int>(i), 1) = d.y / r;
            if (!planar) jac(static_cast<int>(i), 2) = d.z / r;
            res(static_cast<int>(i)) = r - fixes[i].distance;
        }
        Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-res);
        p.x += step(0);
        p.y += step(1);
        if (!planar) p.z += step(2);
        if (step.norm() < kStepTol) break;
    }
    return p;
}

bool references_planar(std::span<const ReferenceFix> fixes) {
    double z0 = fixes[0].position.z;
    for (const auto& f : fixes) {
        if (std::abs(f.position.z - z0) > 1e-9) return false;
    }
    return true;
}

Position reflect_across_line(const Position& p, const Position& a, const Position& b) {
    Vec3 ab = b - a;
    double len2 = ab.dot(ab);
    if (len2 < 1e-18) return p;
    Vec3 ap = p - a;
    double t = ap.dot(ab) / len2;
    Position foot = a + ab * t;
    return foot + (foot - p);
}

}  // namespace

const char* method_name(Method m) {
    return m == Method::Triangulation ? "triangulation" : "multilateration";
}

double rms_range_residual(const Position& p, std::span<const ReferenceFix> fixes) {
    double acc = 0.0;
    for (const auto& f : fixes) {
        double e = distance(p, f.position) - f.distance;
        acc += e * e;
    }
    return std::sqrt(acc / static_cast<double>(fixes.size()));
}

std::size_t worst_fix_index(const Position& p, std::span<const ReferenceFix> fixes) {
    std::size_t worst = 0;
    double worst_err = -1.0;
    for (std::size_t i = 0; i < fixes.size(); ++i) {
        double e = std::abs(distance(p, fixes[i].position) - fixes[i].distance);
        if (e > worst_err) {
            worst_err = e;
            worst = i;
        }
    }
    return worst;
}

PositionEstimate triangulate(std::span<const ReferenceFix> fixes) {
    if (fixes.size() != 3) throw std::invalid_argument("triangulate: exactly 3 fixes required");
    for (const auto& f : fixes) {
        if (f.distance < 0.0) throw std::invalid_argument("triangulate: negative distance");
    }
    const Position& r0 = fixes[0].position;
    const Position& r1 = fixes[1].position;
    const Position& r2 = fixes[2].position;
    double area2 = triangle_area2(r0, r1, r2);
    if (std::abs(area2) / 2.0 <= kCollinearEps) {
        throw std::invalid_argument("triangulate: references are collinear");
    }

    // Linear init: subtract reference 0's circle equation from the others.
    double d0 = fixes[0].distance, d1 = fixes[1].distance, d2 = fixes[2].distance;
    double a11 = 2.0 * (r1.x - r0.x), a12 = 2.0 * (r1.y - r0.y);
    double a21 = 2.0 * (r2.x - r0.x), a22 = 2.0 * (r2.y - r0.y);
    double b1 = d0 * d0 - d1 * d1 + r1.x * r1.x - r0.x * r0.x + r1.y * r1.y - r0.y * r0.y;
    double b2 = d0 * d0 - d2 * d2 + r2.x * r2.x - r0.x * r0.x + r2.y * r2.y - r0.y * r0.y;
    double det = a11 * a22 - a12 * a21;
    Position p{(b1 * a22 - a12 * b2) / det, (a11 * b2 - b1 * a21) / det, r0.z};

    p = gauss_newton(p, fixes, /*planar=*/true);
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw std::runtime_error("triangulate: solver did not converge");
    }
    double res = rms_range_residual(p, fixes);

    // Thin triangles admit a near-mirror solution across the long edge; pick
    // by AoA when measured, else by residual, else by centroid proximity.
    double e01 = distance(r0, r1), e02 = distance(r0, r2), e12 = distance(r1, r2);
    Position la = r0, lb = r1;
    if (e02 >= e01 && e02 >= e12) {
        la = r0;
        lb = r2;
    } else if (e12 >= e01 && e12 >= e02) {
        la = r1;
        lb = r2;
    }
    Position mirror = gauss_newton(reflect_across_line(p, la, lb), fixes, /*planar=*/true);
    double res_m = rms_range_residual(mirror, fixes);
    if (distance(mirror, p) > 1e-6) {
        bool ambiguous = std::abs(res_m - res) <= std::max(1e-9, 1e-6 * std::max(res, res_m));
        bool mirror_wins = res_m < res && !ambiguous;
        if (ambiguous) {
            const ReferenceFix* with_aoa = nullptr;
            for (const auto& f : fixes) {
                if (f.aoa_deg) {
                    with_aoa = &f;
                    break;
                }
            }
            if (with_aoa) {
                double ba = std::abs(ang_diff_deg(bearing_deg(with_aoa->position, p), *with_aoa->aoa_deg));
                double bm = std::abs(ang_diff_deg(bearing_deg(with_aoa->position, mirror), *with_aoa->aoa_deg));
                mirror_wins = bm < ba;
            } else {
                Position centroid = (r0 + r1 + r2) * (1.0 / 3.0);
                mirror_wins = distance(mirror, centroid) < distance(p, centroid);
            }
        }
        if (mirror_wins) {
            p = mirror;
            res = res_m;
        }
    }

    return {p, res, Method::Triangulation, 0.0, 3};
}

PositionEstimate multilaterate(std::span<const ReferenceFix> fixes) {
    if (fixes.size() < 4) throw std::invalid_argument("multilaterate: at least 4 fixes required");
    for (const auto& f : fixes) {
        if (f.distance < 0.0) throw std::invalid_argument("multilaterate: negative distance");
    }
    const bool planar = references_planar(fixes);
    const int dim = planar ? 2 : 3;
    const int rows = static_cast<int>(fixes.size()) - 1;

    const Position& r0 = fixes[0].position;
    const double d0 = fixes[0].distance;
    Eigen::MatrixXd mat(rows, dim);
    Eigen::VectorXd rhs(rows);
    for (int i = 0; i < rows; ++i) {
        const auto& f = fixes[static_cast<std::size_t>(i) + 1];
        mat(i, 0) = 2.0 * (f.position.x - r0.x);
        mat(i, 1) = 2.0 * (f.position.y - r0.y);
        if (!planar) mat(i, 2) = 2.0 * (f.position.z - r0.z);
        double n0 = r0.x * r0.x + r0.y * r0.y + r0.z * r0.z;
        double ni = f.position.x * f.position.x + f.position.y * f.position.y +
                    f.position.z * f.position.z;
        rhs(i) = d0 * d0 - f.distance * f.distance + ni - n0;
    }

    // Geometry must span the solve dimension.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat);
    if (svd.singularValues()(dim - 1) < 1e-6) {
        throw std::invalid_argument(planar ? "multilaterate: references are collinear"
                                           : "multilaterate: references are coplanar");
    }

    Eigen::VectorXd sol = mat.colPivHouseholderQr().solve(rhs);
    Position p{sol(0), sol(1), planar ? r0.z : sol(2)};
    p = gauss_newton(p, fixes, planar);
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
        throw std::runtime_error("multilaterate: solver did not converge");
    }
    return {p, rms_range_residual(p, fixes), Method::Multilateration, 0.0,
            static_cast<int>(fixes.size())};
}

DerivedDistance derive_distance_via_origin(double t_mn, double t_mc, double t_cn, double speed) {
    if (t_mn < 0.0 || t_mc < 0.0 || t_cn < 0.0) {
        throw std::invalid_argument("derive_distance_via_origin: times must be >= 0");
    }
    double d = speed * (t_mn + t_mc - t_cn);
    if (d < 0.0) return {0.0, true};
    return {d, false};
}

PositionEstimate localize_malicious(std::span<const NodeState* const> authenticated,
                                    int target_id, const Position& last_known,
                                    const RangeSampler& sampler, const LocalizeParams& params,
                                    double epoch) {
    // Authentication filter: the target can never vouch for itself.
    std::vector<const NodeState*> pool;
    for (const NodeState* n : authenticated) {
        if (n->id != target_id) pool.push_back(n);
    }
    if (static_cast<int>(pool.size()) < params.k_neighbors) {
        throw std::runtime_error("localize_malicious: fewer than 4 usable neighbors");
    }
    std::sort(pool.begin(), pool.end(), [&](const NodeState* a, const NodeState* b) {
        double da = distance(a->position, last_known);
        double db = distance(b->position, last_known);
        if (da != db) return da < db;
        return a->id < b->id;
    });

    auto range_to = [&](const NodeState* ref) -> std::optional<double> {
        for (int attempt = 0; attempt < params.max_range_retries; ++attempt) {
            auto readings = sampler(*ref, target_id, attempt);
            auto acc = accept_range(readings, params.accept_threshold_m);
            if (acc.status != AcceptStatus::Rejected) return acc.distance;
        }
        return std::nullopt;  // reference abstains this epoch
    };

    std::vector<ReferenceFix> fixes;
    std::vector<const NodeState*> used;
    std::size_t next = 0;
    while (static_cast<int>(fixes.size()) < params.k_neighbors && next < pool.size()) {
        const NodeState* ref = pool[next++];
        if (auto d = range_to(ref)) {
            fixes.push_back({ref->position, *d, std::nullopt});
            used.push_back(ref);
        }
    }
    if (static_cast<int>(fixes.size()) < params.k_neighbors) {
        throw std::runtime_error("localize_malicious: fewer than 4 usable neighbors");
    }

    PositionEstimate est = multilaterate(fixes);
    // A corrupted exchange shows up as range inconsistency; swap the worst
    // fitting neighbor for the next nearest unused one and re-solve.
    while (est.residual > params.residual_threshold_m && next < pool.size()) {
        std::size_t worst = worst_fix_index(est.position, fixes);
        const NodeState* ref = pool[next++];
        auto d = range_to(ref);
        if (!d) continue;
        fixes[worst] = {ref->position, *d, std::nullopt};
        used[worst] = ref;
        est = multilaterate(fixes);
    }
    est.method = Method::Multilateration;
    est.epoch = epoch;
    return est;
}

std::string estimate_csv_header() { return "t,target_id,method,x,y,z,residual,n_fixes"; }

std::string to_csv(const EstimateRow& row) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.3f,%d,%s,%.6f,%.6f,%.6f,%.6f,%d", row.t, row.target_id,
                  method_name(row.method), row.position.x, row.position.y, row.position.z,
                  row.residual, row.n_fixes);
    return buf;
}

}  // namespace manet

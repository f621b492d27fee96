#pragma once

#include <cmath>
#include <stdexcept>

namespace manet {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

using Position = Vec3;

inline double distance(const Position& a, const Position& b) { return (a - b).norm(); }

inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

// Wrap an angle to [0, 360).
inline double norm_deg(double a) {
    double r = std::fmod(a, 360.0);
    if (r < 0.0) r += 360.0;
    if (r == 360.0) r = 0.0;
    return r;
}

// Smallest signed difference a - b, in [-180, 180).
inline double ang_diff_deg(double a, double b) {
    double d = std::fmod(a - b, 360.0);
    if (d < -180.0) d += 360.0;
    if (d >= 180.0) d -= 360.0;
    return d;
}

// Bearing of `to` as seen from `from`, measured counter-clockwise from +x
// (east), in [0, 360). The z components are ignored.
inline double bearing_deg(const Position& from, const Position& to) {
    double dx = to.x - from.x;
    double dy = to.y - from.y;
    if (dx == 0.0 && dy == 0.0) {
        throw std::invalid_argument("bearing undefined for coincident points");
    }
    return norm_deg(rad_to_deg(std::atan2(dy, dx)));
}

// Sector index 1..6. Sector k covers bearings [(k-1)*60, k*60).
inline int sector_of(const Position& center, const Position& point) {
    double b = bearing_deg(center, point);
    int k = static_cast<int>(b / 60.0) + 1;
    return k > 6 ? 6 : k;  // guards b == 360 - eps rounding
}

// Twice the signed area of triangle (a, b, c), xy-plane.
inline double triangle_area2(const Position& a, const Position& b, const Position& c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

}  // namespace manet

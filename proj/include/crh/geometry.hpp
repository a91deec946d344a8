#pragma once

#include <cmath>
#include <numbers>
#include <optional>

namespace crh {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Wraps an angle into [0, 2pi).
inline double normalize_angle(double a) {
    double r = std::fmod(a, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;
    return r;
}

// Absolute angular separation in [0, pi].
inline double angular_gap(double a, double b) {
    return std::fabs(std::remainder(a - b, two_pi));
}

inline Vec2 unit(double heading) { return {std::cos(heading), std::sin(heading)}; }

inline double heading_to(Vec2 from, Vec2 to) {
    return normalize_angle(std::atan2(to.y - from.y, to.x - from.x));
}

inline Vec2 advance(Vec2 p, double heading, double speed, double dt) {
    return p + (speed * dt) * unit(heading);
}

struct Box {
    Vec2 min;
    Vec2 max;

    friend bool operator==(const Box&, const Box&) = default;

    bool contains(Vec2 p, double tol = 0.0) const {
        return p.x >= min.x - tol && p.x <= max.x + tol && p.y >= min.y - tol &&
               p.y <= max.y + tol;
    }
    Vec2 center() const { return {0.5 * (min.x + max.x), 0.5 * (min.y + max.y)}; }
    double width() const { return max.x - min.x; }
    double height() const { return max.y - min.y; }
};

// Earliest t in [0, t_max] with |p + v t - c| <= radius. Points that only
// graze the disc within `slack` count at their closest approach.
std::optional<double> first_entry_time(Vec2 p, Vec2 v, Vec2 c, double radius, double t_max,
                                       double slack);

}  // namespace crh

#include "crh/geometry.hpp"

namespace crh {

std::optional<double> first_entry_time(Vec2 p, Vec2 v, Vec2 c, double radius, double t_max,
                                       double slack) {
    const Vec2 w = p - c;
    const double c0 = dot(w, w);
    if (std::sqrt(c0) <= radius + slack) return 0.0;
    const double a = dot(v, v);
    if (a == 0.0) return std::nullopt;
    const double b = dot(w, v);
    const double t_star = -b / a;
    if (t_star < 0.0) return std::nullopt;
    const Vec2 closest = w + t_star * v;
    const double dmin = norm(closest);
    if (dmin <= radius) {
        const double disc = std::max(0.0, b * b - a * (c0 - radius * radius));
        const double t_in = (-b - std::sqrt(disc)) / a;
        if (t_in <= t_max) return std::max(0.0, t_in);
        return std::nullopt;
    }
    if (dmin <= radius + slack && t_star <= t_max) return t_star;
    return std::nullopt;
}

}  // namespace crh

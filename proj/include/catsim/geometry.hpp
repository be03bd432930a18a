#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace catsim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const = default;

    double norm() const { return std::hypot(x, y); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// Axis-aligned rectangular building footprint, min < max componentwise.
struct Building {
    Vec2 lo;
    Vec2 hi;

    bool contains(const Vec2& p) const {
        return p.x > lo.x && p.x < hi.x && p.y > lo.y && p.y < hi.y;
    }
};

/// Number of exterior-wall crossings of segment a-b for one building.
/// Only strict crossings count: the segment must cross the wall's supporting
/// line with a sign change on both straddle tests. Corner grazing and
/// running along a wall count 0.
int wall_cuts(const Vec2& a, const Vec2& b, const Building& building);

/// Total wall crossings of segment a-b summed over all buildings.
/// Symmetric in (a, b) and additive over disjoint building sets.
int count_wall_cuts(const Vec2& a, const Vec2& b, std::span<const Building> buildings);

}  // namespace catsim

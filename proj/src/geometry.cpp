#include "catsim/geometry.hpp"

#include <algorithm>
#include <array>

namespace catsim {

namespace {

double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// Proper segment-segment intersection: both segments strictly straddle the
// other's supporting line. Endpoint touches and collinear overlap return false.
bool proper_crossing(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
    const double o1 = orient(p1, p2, q1);
    const double o2 = orient(p1, p2, q2);
    const double o3 = orient(q1, q2, p1);
    const double o4 = orient(q1, q2, p2);
    return ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) &&
           ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0));
}

}  // namespace

int wall_cuts(const Vec2& a, const Vec2& b, const Building& building) {
    // Quick reject on the segment's bounding box.
    if (std::max(a.x, b.x) < building.lo.x || std::min(a.x, b.x) > building.hi.x ||
        std::max(a.y, b.y) < building.lo.y || std::min(a.y, b.y) > building.hi.y) {
        return 0;
    }

    const Vec2 c00 = building.lo;
    const Vec2 c10 = {building.hi.x, building.lo.y};
    const Vec2 c11 = building.hi;
    const Vec2 c01 = {building.lo.x, building.hi.y};

    const std::array<std::pair<Vec2, Vec2>, 4> walls = {
        std::pair{c00, c10}, {c10, c11}, {c11, c01}, {c01, c00}};

    int cuts = 0;
    for (const auto& [w1, w2] : walls) {
        if (proper_crossing(a, b, w1, w2)) {
            ++cuts;
        }
    }
    return cuts;
}

int count_wall_cuts(const Vec2& a, const Vec2& b, std::span<const Building> buildings) {
    int total = 0;
    for (const Building& building : buildings) {
        total += wall_cuts(a, b, building);
    }
    return total;
}

}  // namespace catsim

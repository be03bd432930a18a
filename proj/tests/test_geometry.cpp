#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "catsim/geometry.hpp"
#include "catsim/rng.hpp"

using namespace catsim;

namespace {

// Independent reference: walk the segment densely and count strict
// inside/outside transitions. Valid when consecutive crossings are farther
// apart than the sampling step.
int sampled_cuts(const Vec2& a, const Vec2& b, const Building& bld, int samples = 40000) {
    bool prev = bld.contains(a);
    int transitions = 0;
    for (int i = 1; i <= samples; ++i) {
        const double t = static_cast<double>(i) / samples;
        const bool inside = bld.contains(a + (b - a) * t);
        if (inside != prev) ++transitions;
        prev = inside;
    }
    return transitions;
}

// Rejects configurations the cut count declares degenerate: crossings too
// close to segment ends, to each other, or to building corners.
bool degenerate(const Vec2& a, const Vec2& b, const Building& bld) {
    const Vec2 corners[4] = {bld.lo, {bld.hi.x, bld.lo.y}, bld.hi, {bld.lo.x, bld.hi.y}};
    std::vector<double> ts;
    auto wall_hit = [&](const Vec2& w1, const Vec2& w2) {
        const Vec2 d = b - a;
        const Vec2 e = w2 - w1;
        const double denom = d.x * e.y - d.y * e.x;
        if (std::abs(denom) < 1e-12) return;  // parallel: tangency risk
        const Vec2 r = w1 - a;
        const double t = (r.x * e.y - r.y * e.x) / denom;
        const double u = (r.x * d.y - r.y * d.x) / -denom;
        if (t > -0.01 && t < 1.01 && u > -0.01 && u < 1.01) ts.push_back(t);
    };
    for (int w = 0; w < 4; ++w) wall_hit(corners[w], corners[(w + 1) % 4]);
    for (size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] < 1e-3 || ts[i] > 1.0 - 1e-3) return true;
        for (size_t j = i + 1; j < ts.size(); ++j) {
            if (std::abs(ts[i] - ts[j]) < 1e-3) return true;
        }
    }
    for (const Vec2& c : corners) {
        // distance from corner to the segment's supporting line
        const Vec2 d = b - a;
        const double len = d.norm();
        const double dist = std::abs(d.x * (c.y - a.y) - d.y * (c.x - a.x)) / len;
        if (dist < 1e-3) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("vec2 distance") {
    CHECK(distance({1, 2}, {1, 2}) == 0.0);
    CHECK(distance({0, 0}, {3, 4}) == 5.0);
    CHECK(distance({10, 0}, {50, 30}) == 50.0);
}

TEST_CASE("building containment is strict") {
    const Building b{{0, 0}, {10, 10}};
    CHECK(b.contains({5, 5}));
    CHECK_FALSE(b.contains({0, 5}));    // on a wall
    CHECK_FALSE(b.contains({10, 10}));  // corner
    CHECK_FALSE(b.contains({11, 5}));
}

TEST_CASE("wall cuts: segment clear of the building") {
    const Building b{{40, -10}, {60, 10}};
    CHECK(wall_cuts({0, 20}, {100, 20}, b) == 0);
    CHECK(wall_cuts({0, 0}, {10, 0}, b) == 0);
}

TEST_CASE("wall cuts: full crossing counts both walls") {
    const Building b{{40, -10}, {60, 10}};
    CHECK(wall_cuts({0, 0}, {100, 0}, b) == 2);
}

TEST_CASE("wall cuts: start inside, end outside") {
    const Building b{{40, -10}, {60, 10}};
    CHECK(wall_cuts({50, 0}, {100, 0}, b) == 1);
}

TEST_CASE("wall cuts: grazing a corner or running along a wall counts zero") {
    const Building b{{40, -10}, {60, 10}};
    CHECK(wall_cuts({30, 10}, {70, 10}, b) == 0);   // along the top wall
    CHECK(wall_cuts({40, -20}, {40, 20}, b) == 0);  // along the left wall
    CHECK(wall_cuts({30, 20}, {50, 10}, b) == 0);   // endpoint touches the wall
}

TEST_CASE("wall cuts are symmetric in the endpoints") {
    RandomStream rng(99);
    const Building b{{-3, -2}, {4, 5}};
    for (int i = 0; i < 200; ++i) {
        const Vec2 a{rng.uniform(-10, 10), rng.uniform(-10, 10)};
        const Vec2 c{rng.uniform(-10, 10), rng.uniform(-10, 10)};
        CHECK(wall_cuts(a, c, b) == wall_cuts(c, a, b));
    }
}

TEST_CASE("count_wall_cuts adds over buildings") {
    const std::vector<Building> bs = {{{10, -5}, {20, 5}}, {{30, -5}, {40, 5}}, {{50, -5}, {60, 5}}};
    CHECK(count_wall_cuts({0, 0}, {100, 0}, bs) == 6);
    CHECK(count_wall_cuts({0, 0}, {5, 0}, bs) == 0);
}

TEST_CASE("wall cuts agree with a dense sampling oracle") {
    RandomStream rng(2024);
    int checked = 0;
    while (checked < 300) {
        const double x0 = rng.uniform(-50, 50);
        const double y0 = rng.uniform(-50, 50);
        const Building b{{x0, y0}, {x0 + rng.uniform(5, 40), y0 + rng.uniform(5, 40)}};
        const Vec2 a{rng.uniform(-80, 80), rng.uniform(-80, 80)};
        const Vec2 c{rng.uniform(-80, 80), rng.uniform(-80, 80)};
        if (distance(a, c) < 1.0 || degenerate(a, c, b)) continue;
        CAPTURE(a.x);
        CAPTURE(a.y);
        CAPTURE(c.x);
        CAPTURE(c.y);
        REQUIRE(wall_cuts(a, c, b) == sampled_cuts(a, c, b));
        ++checked;
    }
}

#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "catsim/errors.hpp"
#include "catsim/rng.hpp"
#include "catsim/scheme.hpp"

using namespace catsim;

namespace {

const SchemeParams kDefaults{};  // alpha 8, gamma1 3, gamma2 0.5, t 10/60, dt 15

}  // namespace

TEST_CASE("metric normalization endpoints and midpoints") {
    const MetricRange rsrp{-140.0, -50.0};
    const MetricRange rssi{-89.0, -50.0};
    CHECK(normalize_metric(-140.0, rsrp) == 0.0);
    CHECK(normalize_metric(-50.0, rsrp) == 1.0);
    CHECK(normalize_metric(-95.0, rsrp) == 0.5);
    CHECK(normalize_metric(-69.5, rssi) == 0.5);
    CHECK(normalize_metric(-200.0, rsrp) == 0.0);  // clamps
    CHECK(normalize_metric(0.0, rsrp) == 1.0);
}

TEST_CASE("cat probability branches") {
    CHECK(cat_probability(0.9, 5.0, kDefaults) == 0.0);     // still inside t_min
    CHECK(cat_probability(0.9, 10.0, kDefaults) == 0.0);    // boundary is inclusive
    CHECK(cat_probability(0.0, 70.0, kDefaults) == 1.0);    // past t_max
    CHECK(cat_probability(0.0, 60.0, kDefaults) == 1.0);
    CHECK(cat_probability(0.5, 30.0, kDefaults) == 0.00390625);  // 0.5^8
    CHECK(cat_probability(1.0, 30.0, kDefaults) == 1.0);
    CHECK(cat_probability(0.0, 30.0, kDefaults) == 0.0);
}

TEST_CASE("pcat reduces to cat when no trend is predicted") {
    RandomStream rng(31);
    for (int i = 0; i < 1000; ++i) {
        const double theta = rng.u01();
        const double elapsed = rng.uniform(0.0, 80.0);
        CHECK(pcat_probability(theta, 0.0, elapsed, kDefaults) ==
              cat_probability(theta, elapsed, kDefaults));
    }
}

TEST_CASE("pcat defers on an improving channel") {
    // z1 = max(10 * (1-0.5) * 3, 1) = 15, p = 0.5^(8*15)
    const double p = pcat_probability(0.5, 10.0, 30.0, kDefaults);
    CHECK(p == doctest::Approx(7.5231638452626401e-37));
    CHECK(p < cat_probability(0.5, 30.0, kDefaults));
}

TEST_CASE("pcat advances on a degrading channel") {
    // z2 = max(|-10 * 0.5 * 0.5|, 1) = 2.5, p = 0.5^(8/2.5)
    const double p = pcat_probability(0.5, -10.0, 30.0, kDefaults);
    CHECK(p == doctest::Approx(0.1088188204120155));
    CHECK(p > cat_probability(0.5, 30.0, kDefaults));
}

TEST_CASE("small trends clamp the exponent scale to one") {
    CHECK(pcat_probability(0.5, 0.1, 30.0, kDefaults) == cat_probability(0.5, 30.0, kDefaults));
    CHECK(pcat_probability(0.5, -0.1, 30.0, kDefaults) == cat_probability(0.5, 30.0, kDefaults));
}

TEST_CASE("pcat ordering holds for random draws") {
    RandomStream rng(77);
    for (int i = 0; i < 10000; ++i) {
        const double theta = rng.u01();
        const double elapsed = rng.uniform(0.0, 80.0);
        const double dphi = rng.uniform(0.001, 40.0);
        const double cat = cat_probability(theta, elapsed, kDefaults);
        REQUIRE(pcat_probability(theta, dphi, elapsed, kDefaults) <= cat);
        REQUIRE(pcat_probability(theta, -dphi, elapsed, kDefaults) >= cat);
    }
}

TEST_CASE("boundary branches ignore the trend") {
    CHECK(pcat_probability(0.9, -30.0, 5.0, kDefaults) == 0.0);
    CHECK(pcat_probability(0.1, 30.0, 60.0, kDefaults) == 1.0);
}

TEST_CASE("multi-interface probability is max with argmax") {
    using P = std::pair<InterfaceKind, double>;
    const std::array<P, 2> a = {P{InterfaceKind::LTE, 0.2}, P{InterfaceKind::WIFI, 0.7}};
    CHECK(multi_interface_probability(a) == std::pair{0.7, InterfaceKind::WIFI});
    const std::array<P, 2> b = {P{InterfaceKind::WIFI, 0.3}, P{InterfaceKind::LTE, 0.8}};
    CHECK(multi_interface_probability(b) == std::pair{0.8, InterfaceKind::LTE});
    const std::array<P, 2> zeros = {P{InterfaceKind::LTE, 0.0}, P{InterfaceKind::WIFI, 0.0}};
    CHECK(multi_interface_probability(zeros) == std::pair{0.0, InterfaceKind::WIFI});
    const std::array<P, 2> tie = {P{InterfaceKind::LTE, 0.5}, P{InterfaceKind::WIFI, 0.5}};
    CHECK(multi_interface_probability(tie) == std::pair{0.5, InterfaceKind::WIFI});
    const std::array<P, 1> solo = {P{InterfaceKind::LTE, 0.4}};
    CHECK(multi_interface_probability(solo) == std::pair{0.4, InterfaceKind::LTE});
    const std::vector<P> none;
    CHECK_THROWS_AS(multi_interface_probability(none), ConfigError);
}

TEST_CASE("multi-interface matches a brute-force scan") {
    RandomStream rng(13);
    for (int i = 0; i < 1000; ++i) {
        std::vector<std::pair<InterfaceKind, double>> v;
        const int n = 1 + static_cast<int>(rng.pick_index(4));
        for (int k = 0; k < n; ++k) {
            v.emplace_back(rng.u01() < 0.5 ? InterfaceKind::LTE : InterfaceKind::WIFI, rng.u01());
        }
        double best = -1.0;
        InterfaceKind who = InterfaceKind::LTE;
        for (const auto& [iface, p] : v) {
            if (p > best || (p == best && iface == InterfaceKind::WIFI)) {
                best = p;
                who = iface;
            }
        }
        CHECK(multi_interface_probability(v) == std::pair{best, who});
    }
}

TEST_CASE("periodic baseline is due at the interval") {
    CHECK_FALSE(periodic_due(14.9, kDefaults));
    CHECK(periodic_due(15.0, kDefaults));
    CHECK_FALSE(periodic_due(0.0, kDefaults));
    CHECK(periodic_due(40.0, kDefaults));
}

TEST_CASE("decide applies the Bernoulli draw to the combined probability") {
    DecisionContext ctx;
    ctx.interfaces = {{InterfaceKind::LTE, 0.5, 0.0}, {InterfaceKind::WIFI, 0.9, 0.0}};
    ctx.elapsed_s = 70.0;  // forces p = 1
    CHECK(decide(ctx, SchemeKind::Cat, kDefaults, 0.999999).transmit);
    ctx.elapsed_s = 5.0;  // forces p = 0
    CHECK_FALSE(decide(ctx, SchemeKind::Cat, kDefaults, 0.0).transmit);

    DecisionContext half;
    half.interfaces = {{InterfaceKind::LTE, std::pow(0.5, 1.0 / 8.0), 0.0}};
    half.elapsed_s = 30.0;
    const Decision go = decide(half, SchemeKind::Cat, kDefaults, 0.49);
    CHECK(go.transmit);
    CHECK(go.p_combined == doctest::Approx(0.5));
    CHECK_FALSE(decide(half, SchemeKind::Cat, kDefaults, 0.51).transmit);
}

TEST_CASE("decide routes periodic and pcat schemes") {
    DecisionContext ctx;
    ctx.interfaces = {{InterfaceKind::LTE, 0.1, 0.0}};
    ctx.elapsed_s = 16.0;
    CHECK(decide(ctx, SchemeKind::Periodic, kDefaults, 0.5).transmit);
    ctx.elapsed_s = 14.0;
    CHECK_FALSE(decide(ctx, SchemeKind::Periodic, kDefaults, 0.0).transmit);
    // pcat picks the interface whose adjusted probability wins
    DecisionContext pc;
    pc.elapsed_s = 30.0;
    pc.interfaces = {{InterfaceKind::LTE, 0.6, -20.0}, {InterfaceKind::WIFI, 0.7, 15.0}};
    const Decision d = decide(pc, SchemeKind::Pcat, kDefaults, 2.0);
    CHECK(d.iface == InterfaceKind::LTE);  // advance beats the deferred wifi
    CHECK(d.p_combined ==
          doctest::Approx(pcat_probability(0.6, -20.0, 30.0, kDefaults)));
}

TEST_CASE("scheme parameter validation") {
    SchemeParams p = kDefaults;
    p.validate();
    p.t_min_s = 70.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = kDefaults;
    p.t_min_s = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = kDefaults;
    p.alpha = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = kDefaults;
    p.gamma2 = -1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = kDefaults;
    p.delta_t_s = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = kDefaults;
    p.prediction_step_s = p.tau_s * 2.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("transmit buffer flushes atomically") {
    TransmitBuffer buf;
    buf.push({0, 1.0, 10000, true});
    buf.push({1, 2.0, 10000, true});
    buf.push({2, 3.0, 10000, false});
    CHECK(buf.total_bytes() == 30000);
    const auto flushed = buf.flush(9.5);
    CHECK(flushed.size() == 3);
    CHECK(flushed[0].generated_s < flushed[1].generated_s);
    CHECK(buf.packets.empty());
    CHECK(buf.last_tx_s == 9.5);
    CHECK(buf.total_bytes() == 0);
}

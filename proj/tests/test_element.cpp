#include "tplcnn/element.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace tplcnn;
using Catch::Approx;

namespace {

ElementParams unpumped(double v_dc)
{
    ElementParams p;
    p.v_dc = v_dc;
    p.v_ac = 0.0;
    p.pump_period = 1.0;
    return p;
}

} // namespace

TEST_CASE("pump voltage samples the sinusoid")
{
    ElementParams p;
    p.v_dc = 0.6;
    p.v_ac = 0.3;
    p.pump_period = 2.0;
    CHECK(pump_voltage(p, 0.0) == Approx(0.6));
    CHECK(pump_voltage(p, p.pump_period / 4.0) == Approx(0.9));
    CHECK(pump_voltage(p, p.pump_period / 2.0) == Approx(0.6));
}

TEST_CASE("subthreshold element relaxes to its bias and never fires")
{
    ElementParams p = unpumped(0.4);
    ElementState s{0.0, 0.0};
    double prev = s.charge;
    for (int i = 0; i < 4000; ++i) {
        auto events = step_element(s, p, 0.01);
        CHECK(events.empty());
        // monotone approach from below
        CHECK(s.charge >= prev);
        prev = s.charge;
    }
    CHECK(s.charge == Approx(0.4).margin(1e-9));
}

TEST_CASE("unpumped oscillation period equals the RC recharge time ln 3")
{
    // Closed form: recharge from v_th - 1 to v_th toward v_dc gives
    // T = ln((v_dc + v_th) / (v_dc - v_th)); for v_dc = 1, v_th = 0.5 this is ln 3.
    const double expected = std::log(3.0);
    ElementParams p = unpumped(1.0);
    EventTrain train = simulate_element(p, 0.0, 110.0, expected / 1000.0);
    REQUIRE(train.events.size() > 20);
    for (std::size_t i = 1; i < train.events.size(); ++i) {
        if (train.events[i - 1] < 10.0) continue; // transient
        const double gap = train.events[i] - train.events[i - 1];
        CHECK(gap == Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("charge starting exactly at threshold fires immediately")
{
    ElementParams p = unpumped(0.4);
    ElementState s{p.threshold, 0.0};
    auto events = step_element(s, p, 0.01);
    REQUIRE(events.size() == 1);
    CHECK(events[0] == 0.0);
    CHECK(s.charge < p.threshold - 0.5); // reset by one electron
}

TEST_CASE("each event removes exactly one electron")
{
    ElementParams p = unpumped(1.0);
    ElementState s{0.0, 0.0};
    for (int i = 0; i < 5000; ++i) {
        const double before = s.charge;
        auto events = step_element(s, p, 0.01);
        if (events.size() == 1) {
            // crossing charge was (numerically) v_th; reset lands at v_th - 1
            CHECK(s.charge >= p.threshold - 1.0 - 1e-12);
            CHECK(s.charge <= p.threshold - 1.0 + 0.02); // within one step of recharge
        } else {
            CHECK(events.empty());
            CHECK(before <= s.charge);
        }
    }
}

TEST_CASE("event times are stable under step halving")
{
    ElementParams p;
    p.v_dc = 1.0;
    p.v_ac = 0.25;
    p.pump_period = 0.55;
    auto t1 = simulate_element(p, 0.0, 50.0, p.pump_period / 256.0);
    auto t2 = simulate_element(p, 0.0, 50.0, p.pump_period / 512.0);
    REQUIRE(t1.events.size() == t2.events.size());
    for (std::size_t i = 0; i < t1.events.size(); ++i) {
        if (t1.events[i] < 10.0) continue;
        CHECK(std::abs(t1.events[i] - t2.events[i]) < 1e-7);
    }
}

TEST_CASE("natural frequency closed form")
{
    CHECK(*natural_frequency(unpumped(1.0)) == Approx(1.0 / std::log(3.0)));
    CHECK_FALSE(natural_frequency(unpumped(0.4)).has_value());
    // asymptotic: f -> v_dc / (2 v_th)
    CHECK(*natural_frequency(unpumped(100.0)) == Approx(100.0).epsilon(0.01));

    ElementParams pumped = unpumped(1.0);
    pumped.v_ac = 0.1;
    CHECK_THROWS_AS(natural_frequency(pumped), DomainError);
}

TEST_CASE("deterministic simulation is bit-reproducible")
{
    ElementParams p;
    p.v_dc = 0.9;
    p.v_ac = 0.3;
    p.pump_period = 0.6;
    auto a = simulate_element(p, 0.1, 40.0, p.pump_period / 256.0);
    auto b = simulate_element(p, 0.1, 40.0, p.pump_period / 256.0);
    CHECK(a.events == b.events);
}

TEST_CASE("cascade overflow on nonphysical parameters")
{
    ElementParams p = unpumped(500.0);
    CHECK_THROWS_AS(simulate_element(p, 0.0, 2.0, 1.0), CascadeOverflow);
}

TEST_CASE("invalid parameters are rejected")
{
    ElementParams p;
    p.pump_period = -1.0;
    CHECK_THROWS_AS(simulate_element(p, 0.0, 1.0, 0.1), ConfigError);
    p = ElementParams{};
    p.v_ac = -0.5;
    CHECK_THROWS_AS(simulate_element(p, 0.0, 1.0, 0.1), ConfigError);
    p = ElementParams{};
    CHECK_THROWS_AS(simulate_element(p, 0.0, -1.0, 0.1), DomainError);
}

TEST_CASE("stochastic mode is reproducible and seed dependent")
{
    ElementParams p = unpumped(0.55);
    p.stochastic = StochasticParams{1.0, 0.02, 42};
    auto a = simulate_element(p, 0.0, 200.0, 0.01);
    auto b = simulate_element(p, 0.0, 200.0, 0.01);
    CHECK(a.events == b.events);
    CHECK(!a.events.empty()); // thermally activated below threshold

    p.stochastic->rng_seed = 43;
    auto c = simulate_element(p, 0.0, 200.0, 0.01);
    CHECK(a.events != c.events);
}

TEST_CASE("stochastic mode at zero temperature stays silent below threshold")
{
    ElementParams p = unpumped(0.45);
    p.stochastic = StochasticParams{1.0, 0.0, 7};
    auto train = simulate_element(p, 0.0, 100.0, 0.01);
    CHECK(train.events.empty());
}

TEST_CASE("stochastic rate law limits")
{
    StochasticParams s{2.0, 0.0, 0};
    CHECK(detail::tunnel_rate(0.1, s) == Approx(0.05));
    CHECK(detail::tunnel_rate(-0.1, s) == 0.0);
    s.temperature = 0.05;
    // near delta_e = 0 the rate tends to theta / r_t
    CHECK(detail::tunnel_rate(1e-15, s) == Approx(0.025).epsilon(1e-6));
    // detailed-balance-style suppression below threshold
    CHECK(detail::tunnel_rate(-0.2, s) == Approx(0.2 / (2.0 * (std::exp(4.0) - 1.0))));
}

#include "edr/domain.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace edr;
using std::chrono::hours;
using std::chrono::minutes;

TEST(ClockTime, ParsesAndPrints)
{
    EXPECT_EQ(ClockTime::parse("07:00").minutes(), 420);
    EXPECT_EQ(ClockTime::parse("24:00").minutes(), 1440);
    EXPECT_EQ(ClockTime::parse("16:45").to_string(), "16:45");
    EXPECT_THROW(ClockTime::parse("7"), DomainError);
    EXPECT_THROW(ClockTime::parse("24:15"), DomainError);
    EXPECT_THROW(ClockTime::parse("12:60"), DomainError);
    EXPECT_THROW(ClockTime::parse("ab:cd"), DomainError);
}

TEST(TimeGrid, EventWindows)
{
    const TimeGrid noon = make_time_grid(ClockTime::parse("12:00"), hours{5}, minutes{15});
    EXPECT_EQ(noon.steps(), 20u);
    EXPECT_EQ(noon.end().to_string(), "17:00");

    const TimeGrid morning = make_time_grid(ClockTime::parse("07:00"), hours{5}, minutes{15});
    EXPECT_EQ(morning.steps(), 20u);
    EXPECT_EQ(morning.end().to_string(), "12:00");
    EXPECT_EQ(morning.time_at(3).to_string(), "07:45");
    EXPECT_DOUBLE_EQ(morning.step_hours(), 0.25);
}

TEST(TimeGrid, RejectsBadShapes)
{
    EXPECT_THROW(make_time_grid(ClockTime::parse("07:00"), hours{5}, minutes{14}), DomainError);
    EXPECT_THROW(make_time_grid(ClockTime::parse("07:00"), hours{0}, minutes{15}), DomainError);
    EXPECT_THROW(make_time_grid(ClockTime::parse("07:00"), hours{5}, minutes{0}), DomainError);
    EXPECT_THROW(make_time_grid(ClockTime::parse("22:00"), hours{5}, minutes{15}), DomainError);
}

TEST(PricePerKwh, Examples)
{
    EXPECT_DOUBLE_EQ(price_per_kwh(75), 0.075);
    EXPECT_DOUBLE_EQ(price_per_kwh(200), 0.200);
    EXPECT_EQ(price_per_kwh(0), 0.0);
    EXPECT_THROW(price_per_kwh(-1), DomainError);
}

TEST(PricePerKwh, RoundTripsWholeAndFractionalPrices)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(0.0, 1000.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = (i % 2 == 0) ? std::round(d(rng)) : std::round(d(rng) * 100.0) / 100.0;
        EXPECT_NEAR(price_per_kwh(x) * 1000.0, x, 1e-12 * std::max(1.0, x));
    }
}

TEST(EvPrice, Examples)
{
    const TimeGrid g = make_time_grid(ClockTime::parse("12:00"), minutes{30}, minutes{15});
    const PriceSeries flat(g, {0.10, 0.10});
    StationConfig k3;
    const PriceSeries ev = ev_price(flat, k3);
    EXPECT_NEAR(ev[0], 0.30, 1e-15);
    EXPECT_NEAR(ev[1], 0.30, 1e-15);

    const PriceSeries ramp(g, {0.05, 0.08});
    const PriceSeries ev2 = ev_price(ramp, k3);
    EXPECT_NEAR(ev2[0], 0.15, 1e-15);
    EXPECT_NEAR(ev2[1], 0.24, 1e-15);

    StationConfig k1;
    k1.ev_price_multiplier = 1.0;
    EXPECT_THROW(k1.validate(), DomainError);
}

TEST(EvPrice, IsPointwiseMultiple)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> p(0.0, 0.5);
    std::uniform_real_distribution<double> k(1.01, 6.0);
    const TimeGrid g = make_time_grid(ClockTime::parse("00:00"), hours{24}, minutes{15});
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(g.steps());
        for (double& x : v) {
            x = p(rng);
        }
        StationConfig st;
        st.ev_price_multiplier = k(rng);
        const PriceSeries ev = ev_price(PriceSeries(g, v), st);
        for (std::size_t t = 0; t < v.size(); ++t) {
            EXPECT_EQ(ev[t], st.ev_price_multiplier * v[t]);
        }
    }
}

TEST(Scenario, RejectsMisalignedSeries)
{
    const TimeGrid g = make_time_grid(ClockTime::parse("12:00"), hours{1}, minutes{15});
    EXPECT_THROW(PriceSeries(g, {0.1, 0.1, 0.1}), DomainError);
    EXPECT_THROW(LoadForecast(g, {1, 2, 3, 4, 5}), DomainError);
    EXPECT_THROW(EdrSignal(g, {0.1, 0.1, 0.1, 0.1}, {1, 1, 1}, ClockTime::parse("11:00"), minutes{60}),
                 DomainError);
}

TEST(Scenario, NotificationMustPrecedeWindow)
{
    const TimeGrid g = make_time_grid(ClockTime::parse("12:00"), hours{1}, minutes{15});
    const std::vector<double> inc(4, 0.1);
    const std::vector<double> red(4, 10.0);
    EXPECT_NO_THROW(EdrSignal(g, inc, red, ClockTime::parse("11:00"), minutes{60}));
    EXPECT_THROW(EdrSignal(g, inc, red, ClockTime::parse("10:00"), minutes{60}), DomainError);
}

TEST(BesSpec, Invariants)
{
    BesSpec ok = fixtures::reference_bes();
    EXPECT_NO_THROW(ok.validate());

    BesSpec swapped = ok;
    std::swap(swapped.discharge_eff, swapped.charge_eff);
    EXPECT_THROW(swapped.validate(), DomainError);

    BesSpec high = ok;
    high.initial_soc = 0.9;
    try {
        high.validate();
        FAIL() << "expected DomainError";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("initial_soc"), std::string::npos) << e.what();
    }

    BesSpec negative = ok;
    negative.rated_capacity_kwh = -1.0;
    EXPECT_THROW(negative.validate(), DomainError);
}

TEST(Scenario, WithersKeepOtherFields)
{
    const Scenario s = fixtures::make_scenario(fixtures::flat_series(4, 100, 200, 75, 50), fixtures::reference_bes());
    BesSpec bigger = s.bes();
    bigger.rated_capacity_kwh = 800.0;
    const Scenario t = s.with_bes(bigger);
    EXPECT_EQ(t.bes().rated_capacity_kwh, 800.0);
    EXPECT_EQ(t.prices(), s.prices());
    EXPECT_EQ(t.forecast(), s.forecast());
    EXPECT_EQ(t.edr(), s.edr());
    EXPECT_FALSE(t == s);
    EXPECT_TRUE(s.with_bes(s.bes()) == s);
}

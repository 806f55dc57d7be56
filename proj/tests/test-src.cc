#include "oracles.h"

#include "smartem/src-outage.h"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace smartem;

namespace
{

SrcOptions
Options(double density, double sectorDeg, std::size_t trials, std::uint64_t seed = 1)
{
    SrcOptions o;
    o.obstacles.densityPerM2 = density;
    o.selfBlockageWidthDeg = sectorDeg;
    o.trials = trials;
    o.seed = seed;
    return o;
}

/// Accepts an estimate when the truth lies inside an interval widened to about 4 sigma.
bool
Consistent(const ProportionInterval& ci, double truth, std::size_t trials)
{
    const double sigma = std::sqrt(std::max(truth * (1.0 - truth), 1e-12) / static_cast<double>(trials));
    return std::abs(ci.estimate - truth) <= 4.0 * sigma + 1e-12;
}

} // namespace

TEST_CASE("counter RNG depends only on seed and counter")
{
    CounterRng a(9, 4);
    CounterRng b(9, 4);
    CounterRng c(9, 5);
    const auto x = a.Next();
    CHECK(x == b.Next());
    CHECK(x != c.Next());
    for (int i = 0; i < 1000; ++i)
    {
        const double u = a.Uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    double mean = 0.0;
    CounterRng p(1, 0);
    for (int i = 0; i < 20000; ++i)
    {
        mean += static_cast<double>(p.Poisson(3.5));
    }
    CHECK(mean / 20000.0 == doctest::Approx(3.5).epsilon(0.02));
}

TEST_CASE("empty street with no body never drops the connection")
{
    const SrcEstimate e = EstimateSrcOutage(SrcGeometry{}, Options(0.0, 0.0, 2000));
    CHECK(e.outages == 0);
    CHECK(e.outage.estimate == 0.0);
    CHECK(e.primaryBlocked == 0);
    CHECK(e.outage.low == 0.0);
}

TEST_CASE("body sector alone matches the angular overlap probability")
{
    const std::size_t n = 40000;
    for (double sep : {10.0, 30.0, 59.0, 90.0})
    {
        SrcGeometry g;
        g.separationDeg = sep;
        const SrcEstimate e = EstimateSrcOutage(g, Options(0.0, 60.0, n, 3));
        CHECK(Consistent(e.outage, oracle::SectorCoversBothProbability(60.0, sep), n));
        CHECK(Consistent(e.primary, 60.0 / 360.0, n));
    }
}

TEST_CASE("obstacles alone match the Poisson segment oracle")
{
    const std::size_t n = 20000;
    for (double length : {10.0, 25.0, 60.0})
    {
        SrcGeometry g;
        g.primaryLengthM = length;
        g.reflectedLengthM = length;
        const SrcEstimate e = EstimateSrcOutage(g, Options(0.01, 0.0, n, 5));
        CHECK(Consistent(e.primary, oracle::SegmentBlockingProbability(0.01, 0.3, length), n));
    }
}

TEST_CASE("doubling a link length compounds blocking like two independent halves")
{
    const double p = oracle::SegmentBlockingProbability(0.01, 0.3, 20.0);
    const double p2 = oracle::SegmentBlockingProbability(0.01, 0.3, 40.0);
    // Halves share one end cap, so the product relation holds up to that overlap.
    const double cap = 1.0 - std::exp(-0.01 * std::numbers::pi * 0.09);
    CHECK(std::abs((1.0 - p2) - (1.0 - p) * (1.0 - p) / (1.0 - cap)) < 1e-12);

    const std::vector<double> lengths{40.0, 20.0};
    const auto rows = LinkLengthSensitivity(SrcGeometry{}, lengths, Options(0.01, 0.0, 20000, 8));
    REQUIRE(rows.size() == 2);
    CHECK(Consistent(rows[0].primary, p, 20000));
    CHECK(Consistent(rows[1].primary, p2, 20000));
    CHECK(std::abs((1.0 - rows[1].primary.estimate) - std::pow(1.0 - rows[0].primary.estimate, 2.0)) < 0.02);
}

TEST_CASE("length table is sorted and grows with length")
{
    const std::vector<double> lengths{80.0, 5.0, 40.0, 1e-3, 20.0};
    const auto rows = LinkLengthSensitivity(SrcGeometry{}, lengths, Options(0.01, 0.0, 5000, 2));
    REQUIRE(rows.size() == lengths.size());
    for (std::size_t i = 1; i < rows.size(); ++i)
    {
        CHECK(rows[i].geometry.primaryLengthM > rows[i - 1].geometry.primaryLengthM);
        CHECK(rows[i].outage.high >= rows[i - 1].outage.low);
        CHECK(rows[i].primary.estimate >= rows[i - 1].primary.estimate - 0.02);
    }
    CHECK(rows[0].outage.estimate < 0.01);
    const std::vector<double> bad{10.0, 0.0};
    CHECK_THROWS_AS(LinkLengthSensitivity(SrcGeometry{}, bad, Options(0.01, 0.0, 10)), std::domain_error);
}

TEST_CASE("wider separation protects the connection")
{
    const std::vector<double> seps{10.0, 90.0};
    const auto rows = SweepSeparation(SrcGeometry{}, seps, Options(0.01, 60.0, 10000));
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].outage.high < rows[0].outage.low);
}

TEST_CASE("estimates do not depend on the worker count")
{
    SrcOptions o = Options(0.02, 60.0, 3000, 42);
    o.workers = 1;
    const SrcEstimate a = EstimateSrcOutage(SrcGeometry{}, o);
    o.workers = 4;
    const SrcEstimate b = EstimateSrcOutage(SrcGeometry{}, o);
    CHECK(a.outages == b.outages);
    CHECK(a.oneUp == b.oneUp);
    CHECK(a.primaryBlocked == b.primaryBlocked);
    o.seed = 43;
    CHECK(EstimateSrcOutage(SrcGeometry{}, o).primaryBlocked != a.primaryBlocked);
}

TEST_CASE("trial outcome follows its blocked flags")
{
    const SrcOptions o = Options(0.05, 60.0, 1, 7);
    for (std::uint64_t i = 0; i < 200; ++i)
    {
        const SrcTrial t = DrawSrcTrial(SrcGeometry{}, o, i);
        CHECK(t.primaryBlocked == IsPathBlocked(t.primaryEnd, t.obstacles, t.selfBlockageCenterDeg, 60.0));
        CHECK(t.reflectedBlocked == IsPathBlocked(t.reflectedEnd, t.obstacles, t.selfBlockageCenterDeg, 60.0));
        const SrcOutcome expected = t.primaryBlocked && t.reflectedBlocked ? SrcOutcome::Outage
                                    : t.primaryBlocked || t.reflectedBlocked ? SrcOutcome::OneUp
                                                                             : SrcOutcome::BothUp;
        CHECK(t.outcome == expected);
    }
}

TEST_CASE("path blocking geometry")
{
    const std::vector<Disk> none;
    CHECK_FALSE(IsPathBlocked({10.0, 0.0}, none, 180.0, 60.0));
    CHECK(IsPathBlocked({10.0, 0.0}, none, 25.0, 60.0));
    const std::vector<Disk> near{{{5.0, 0.29}, 0.3}};
    CHECK(IsPathBlocked({10.0, 0.0}, near, 180.0, 0.0));
    const std::vector<Disk> past{{{10.5, 0.0}, 0.3}};
    CHECK_FALSE(IsPathBlocked({10.0, 0.0}, past, 180.0, 0.0));
    const std::vector<Disk> aside{{{5.0, 0.31}, 0.3}};
    CHECK_FALSE(IsPathBlocked({10.0, 0.0}, aside, 180.0, 0.0));
}

TEST_CASE("Wilson interval")
{
    const auto zero = WilsonInterval(0, 100);
    CHECK(zero.estimate == 0.0);
    CHECK(zero.low == 0.0);
    CHECK(zero.high == doctest::Approx(0.0370).epsilon(0.01));
    const auto half = WilsonInterval(50, 100);
    CHECK(half.low == doctest::Approx(0.4038).epsilon(1e-3));
    CHECK(half.high == doctest::Approx(0.5962).epsilon(1e-3));
    const auto all = WilsonInterval(100, 100);
    CHECK(all.high == doctest::Approx(1.0));
    CHECK(all.low < 1.0);
}

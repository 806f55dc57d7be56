#include "oracles.h"

#include "smartem/scenario-io.h"
#include "smartem/simulate.h"
#include "smartem/src-outage.h"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace smartem;

namespace
{

Scenario
CrossStreet()
{
    return LoadScenario(std::string(SMARTEM_TEST_DATA) + "/cross-street.json").scenario;
}

PlacedNode
Gnb(double x, double y)
{
    PlacedNode n;
    n.id = "gnb0";
    n.spec = GnbSpec{};
    n.position = {x, y, 10.0};
    return n;
}

Building
Box(double x0, double y0, double x1, double y1, double loss)
{
    Building b;
    b.id = "box";
    b.footprint = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
    b.heightM = 30.0;
    b.penetrationLossDb = loss;
    return b;
}

double
FreeSpaceRx(const Point3& a, const Point3& b)
{
    return 65.0 - oracle::FsplDb(Distance(a, b), 28e9);
}

} // namespace

TEST_CASE("open field is fully covered")
{
    Scenario s;
    s.nodes.push_back(Gnb(0.0, 0.0));
    s.grid.origin = {-50.0, -50.0, 0.0};
    s.grid.nx = 21;
    s.grid.ny = 21;
    s.grid.spacingM = 5.0;
    s.radio.coverageThresholdDbm = -70.0;
    const CoverageReport r = EvaluateGrid(s);
    CHECK(r.coverageFraction == 1.0);
    CHECK(r.indoorPoints == 0);
    REQUIRE(r.points.size() == 441);
    for (const LinkResult& p : r.points)
    {
        CHECK(p.rxPowerDbm == doctest::Approx(FreeSpaceRx(s.nodes[0].position, p.position)).epsilon(1e-12));
        CHECK(p.path.kind == PathKind::Direct);
        CHECK(p.losFirst);
        CHECK(p.terms.LedgerHolds());
    }
}

TEST_CASE("shadowed point carries penetration-only power")
{
    Scenario s;
    s.nodes.push_back(Gnb(0.0, 0.0));
    s.buildings.push_back(Box(20.0, -5.0, 30.0, 5.0, 40.0));
    s.buildings.push_back(Box(50.0, -5.0, 60.0, 5.0, 40.0));
    s.grid.origin = {80.0, 0.0, 0.0};
    s.grid.ueHeightM = 1.5;
    const CoverageReport r = EvaluateGrid(s);
    REQUIRE(r.points.size() == 1);
    const LinkResult& p = r.points[0];
    CHECK_FALSE(p.losFirst);
    CHECK(p.terms.penetrationDb == 160.0);

    // Each block adds one wall on the way in and one on the way out.
    const Point3 ue = s.grid.PointAt(0);
    CHECK(CountWallCrossings(s.nodes[0].position, ue, s.buildings).count == 4);
    CHECK(p.rxPowerDbm == doctest::Approx(FreeSpaceRx(s.nodes[0].position, ue) - 160.0).epsilon(1e-12));

    s.buildings.pop_back();
    const LinkResult q = EvaluateGrid(s).points[0];
    CHECK(q.rxPowerDbm == doctest::Approx(FreeSpaceRx(s.nodes[0].position, ue) - 80.0).epsilon(1e-12));
}

TEST_CASE("side-street point in the fixture is lit only through two walls")
{
    const Scenario s = GnbOnly(CrossStreet());
    const Point3 ue{16.5, 24.5, s.grid.ueHeightM};
    const auto links = EnumerateLinks(s, ue);
    REQUIRE(links.size() == 1);
    const WallCrossings w = CountWallCrossings(s.nodes[0].position, ue, s.buildings);
    CHECK(w.count == 2);
    CHECK(links[0].rxPowerDbm == doctest::Approx(FreeSpaceRx(s.nodes[0].position, ue) - 80.0).epsilon(1e-12));
}

TEST_CASE("indoor points are excluded")
{
    Scenario s;
    s.nodes.push_back(Gnb(0.0, 0.0));
    s.buildings.push_back(Box(9.0, -1.0, 21.0, 21.0, 20.0));
    s.grid.origin = {0.0, 0.0, 0.0};
    s.grid.nx = 4;
    s.grid.ny = 1;
    s.grid.spacingM = 10.0;
    const CoverageReport r = EvaluateGrid(s);
    CHECK(r.indoorPoints == 2);
    REQUIRE(r.points.size() == 2);
    CHECK(r.points[0].ueIndex == 0);
    CHECK(r.points[1].ueIndex == 3);
}

TEST_CASE("adding surfaces never lowers any point")
{
    const Scenario full = CrossStreet();
    const CoverageReport before = EvaluateGrid(GnbOnly(full));
    Scenario growing = GnbOnly(full);
    CoverageReport previous = before;
    for (const PlacedNode& n : full.nodes)
    {
        if (ClassOf(n.spec) == NodeClass::Gnb)
        {
            continue;
        }
        growing.nodes.push_back(n);
        const CoverageReport now = EvaluateGrid(growing);
        REQUIRE(now.points.size() == previous.points.size());
        std::size_t raised = 0;
        for (std::size_t i = 0; i < now.points.size(); ++i)
        {
            CHECK(now.points[i].rxPowerDbm >= previous.points[i].rxPowerDbm);
            raised += now.points[i].rxPowerDbm > previous.points[i].rxPowerDbm;
        }
        CHECK(raised > 0);
        CHECK(now.coverageFraction >= previous.coverageFraction);
        previous = now;
    }
}

TEST_CASE("coverage fraction counts points at or above threshold")
{
    const CoverageReport r = EvaluateGrid(CrossStreet());
    const auto covered = std::count_if(r.points.begin(), r.points.end(), [&](const LinkResult& p) {
        return p.rxPowerDbm >= r.thresholdDbm;
    });
    CHECK(static_cast<std::size_t>(covered) == r.coveredPoints);
    CHECK(r.coverageFraction == doctest::Approx(static_cast<double>(covered) / r.points.size()).epsilon(1e-15));
}

TEST_CASE("recorded best path is the maximum over a fresh enumeration")
{
    const Scenario s = CrossStreet();
    const CoverageReport r = EvaluateGrid(s);
    CounterRng rng(77, 0);
    for (int k = 0; k < 100; ++k)
    {
        const auto i = static_cast<std::size_t>(rng.Uniform() * static_cast<double>(r.points.size()));
        const LinkResult& p = r.points[i];
        const auto links = EnumerateLinks(s, p.position);
        REQUIRE_FALSE(links.empty());
        double best = links[0].rxPowerDbm;
        std::string bestPath = DescribePath(links[0].path, s);
        for (const LinkResult& l : links)
        {
            CHECK(l.terms.LedgerHolds());
            CHECK(l.rxPowerDbm == l.terms.rxPowerDbm);
            if (l.rxPowerDbm > best)
            {
                best = l.rxPowerDbm;
                bestPath = DescribePath(l.path, s);
            }
        }
        CHECK(p.rxPowerDbm == best);
        CHECK(DescribePath(p.path, s) == bestPath);
        CHECK(p.terms.LedgerHolds());
    }
}

TEST_CASE("grid evaluation is deterministic and independent of workers")
{
    const Scenario s = CrossStreet();
    EvaluateOptions one;
    one.workers = 1;
    EvaluateOptions four;
    four.workers = 4;
    const CoverageReport a = EvaluateGrid(s, one);
    const CoverageReport b = EvaluateGrid(s, four);
    const CoverageReport c = EvaluateGrid(s, four);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i)
    {
        CHECK(a.points[i].rxPowerDbm == b.points[i].rxPowerDbm);
        CHECK(a.points[i].capacityBps == b.points[i].capacityBps);
        CHECK(b.points[i].rxPowerDbm == c.points[i].rxPowerDbm);
    }
}

TEST_CASE("capacity follows the Shannon formula from the noise floor")
{
    const CoverageReport r = EvaluateGrid(CrossStreet());
    for (std::size_t i = 0; i < r.points.size(); i += 97)
    {
        const LinkResult& p = r.points[i];
        double snr = p.rxPowerDbm - oracle::NoiseDbm(400e6, 7.0);
        if (p.path.node && DescribePath(p.path, CrossStreet()).find("rep") != std::string::npos)
        {
            snr -= 3.0;
        }
        CHECK(p.capacityBps == doctest::Approx(400e6 * std::log2(1.0 + std::pow(10.0, snr / 10.0))).epsilon(1e-3));
    }
}

TEST_CASE("empirical CDF")
{
    const std::vector<double> one{4.0};
    auto c = EmpiricalCdf(one);
    REQUIRE(c.size() == 1);
    CHECK(c[0].value == 4.0);
    CHECK(c[0].probability == 1.0);

    const std::vector<double> two{7.0, 3.0};
    c = EmpiricalCdf(two);
    REQUIRE(c.size() == 2);
    CHECK(c[0].value == 3.0);
    CHECK(c[0].probability == 0.5);
    CHECK(c[1].probability == 1.0);

    const std::vector<double> ties{1.0, 2.0, 2.0, 2.0, 5.0};
    c = EmpiricalCdf(ties);
    REQUIRE(c.size() == 3);
    CHECK(c[1].probability == doctest::Approx(0.8));

    CHECK(Quantile(ties, 0.2) == 1.0);
    CHECK(Quantile(ties, 0.21) == 2.0);
    CHECK(Quantile(ties, 1.0) == 5.0);

    const std::vector<double> empty;
    CHECK_THROWS_AS(EmpiricalCdf(empty), std::domain_error);
    CHECK_THROWS_AS(Quantile(empty, 0.5), std::domain_error);
}

TEST_CASE("uniform sample stays within the DKW band")
{
    CounterRng rng(2024, 0);
    std::vector<double> values(10000);
    for (double& v : values)
    {
        v = rng.Uniform();
    }
    // P(sup |F_n - F| > eps) <= 2 exp(-2 n eps^2) = 1e-3
    const double eps = std::sqrt(std::log(2.0 / 1e-3) / (2.0 * 10000.0));
    const auto c = EmpiricalCdf(values);
    double previous = 0.0;
    double worst = 0.0;
    for (const CdfPoint& p : c)
    {
        CHECK(p.probability >= previous);
        worst = std::max(worst, std::abs(p.probability - p.value));
        previous = p.probability;
    }
    CHECK(c.back().probability == 1.0);
    CHECK(worst < eps);

    const std::vector<double> grid = DefaultPercentileGrid();
    const auto rows = Cdf(values, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        CHECK(std::abs(rows[i].value - grid[i]) < eps);
        CHECK(rows[i].probability >= grid[i]);
    }
}

TEST_CASE("comparing reports")
{
    const Scenario s = CrossStreet();
    const CoverageReport base = EvaluateGrid(GnbOnly(s));
    const DeltaReport same = CompareReports(base, base);
    CHECK(same.coverageDelta == 0.0);
    CHECK(same.cellEdgePowerDeltaDb == 0.0);
    CHECK(same.medianCapacityRatio == 1.0);
    for (const PercentileDelta& p : same.percentiles)
    {
        CHECK(p.rxPowerDeltaDb == 0.0);
        CHECK(p.capacityDeltaBps == 0.0);
    }

    const CoverageReport full = EvaluateGrid(s);
    const DeltaReport d = CompareReports(base, full);
    CHECK(d.coverageDelta == doctest::Approx(full.coverageFraction - base.coverageFraction));
    CHECK(d.cellEdgePowerDeltaDb ==
          doctest::Approx(full.Percentile(0.10).rxPowerDbm - base.Percentile(0.10).rxPowerDbm));
    CHECK(d.medianCapacityRatio ==
          doctest::Approx(full.Percentile(0.5).capacityBps / base.Percentile(0.5).capacityBps));

    Scenario shifted = s;
    shifted.grid.spacingM = 1.01;
    CHECK_THROWS_AS(CompareReports(base, EvaluateGrid(shifted)), std::domain_error);
}

TEST_CASE("path names")
{
    const Scenario s = CrossStreet();
    ServingPath direct;
    direct.kind = PathKind::Direct;
    CHECK(DescribePath(direct, s) == "gnb0");
    ServingPath relayed;
    relayed.kind = PathKind::Relayed;
    relayed.node = 1;
    CHECK(DescribePath(relayed, s) == "gnb0>" + s.nodes[1].id);
}

#include "smartem/scenario.h"

#include "smartem/scenario-io.h"

#include "doctest.h"

#include <cmath>
#include <filesystem>

using namespace smartem;

namespace
{

Building
Box(double x0, double y0, double x1, double y1, double h = 20.0, double loss = 40.0)
{
    return {"box", {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}, h, loss};
}

Scenario
Minimal()
{
    Scenario s;
    s.nodes.push_back({"gnb0", GnbSpec{}, {0.0, 0.0, 10.0}, 0.0});
    s.grid.nx = 4;
    s.grid.ny = 4;
    return s;
}

bool
HasRule(const std::vector<Violation>& v, const std::string& rule)
{
    for (const Violation& x : v)
    {
        if (x.rule == rule)
        {
            return true;
        }
    }
    return false;
}

} // namespace

TEST_CASE("segment clear of every footprint")
{
    const std::vector<Building> b{Box(0, 0, 1, 1)};
    const WallCrossings w = CountWallCrossings({2, 0, 1}, {2, 5, 1}, b);
    CHECK(w.count == 0);
    CHECK(w.penetrationDb == 0.0);
}

TEST_CASE("segment through a unit square crosses two walls")
{
    const std::vector<Building> b{Box(0, 0, 1, 1)};
    const WallCrossings w = CountWallCrossings({-1, 0.5, 1}, {2, 0.5, 1}, b);
    CHECK(w.count == 2);
    CHECK(w.penetrationDb == doctest::Approx(80.0));
}

TEST_CASE("segment over a low roof is clear")
{
    const std::vector<Building> b{Box(0, 0, 1, 1, 5.0)};
    CHECK(CountWallCrossings({-1, 0.5, 10}, {2, 0.5, 8}, b).count == 0);
    // Interpolated height drops below the roof inside the second half.
    CHECK(CountWallCrossings({-1, 0.5, 10}, {2, 0.5, 1}, b).count > 0);
}

TEST_CASE("grazing a vertex or running along a wall counts as blocked")
{
    const std::vector<Building> b{Box(0, 0, 1, 1)};
    // Through the corner (1, 1) only.
    CHECK(CountWallCrossings({0, 2, 1}, {2, 0, 1}, b).count == 2);
    // Along the bottom edge.
    CHECK(CountWallCrossings({-1, 0, 1}, {2, 0, 1}, b).count == 2);
    CHECK_FALSE(IsLos({-1, 0, 1}, {2, 0, 1}, b));
}

TEST_CASE("endpoint on a facade")
{
    const std::vector<Building> b{Box(0, 0, 1, 1)};
    // Leaving a wall outward is clear, heading into the building is blocked.
    CHECK(CountWallCrossings({1, 0.5, 1}, {3, 0.5, 1}, b).count == 0);
    CHECK(CountWallCrossings({1, 0.5, 1}, {-1, 0.5, 1}, b).count == 2);
}

TEST_CASE("coincident endpoints are rejected")
{
    CHECK_THROWS_AS(CountWallCrossings({1, 1, 1}, {1, 1, 1}, {}), std::domain_error);
}

TEST_CASE("vertical segment beside a building is line of sight")
{
    const std::vector<Building> b{Box(0, 0, 1, 1)};
    CHECK(IsLos({2, 2, 1}, {2, 2, 30}, b));
}

TEST_CASE("line of sight is symmetric, monotone in obstacles and translation invariant")
{
    std::vector<Building> b{Box(0, 0, 4, 4), Box(6, -3, 7, 8), Box(10, 2, 14, 3, 3.0)};
    const std::vector<std::pair<Point3, Point3>> pairs{
        {{-2, 2, 1.5}, {9, 2, 1.5}},   {{5, -5, 10}, {5, 12, 1.5}}, {{-1, -1, 6}, {15, 10, 1.5}},
        {{8, 1, 2}, {16, 2.5, 2}},     {{0, 6, 1}, {12, 6, 1}},      {{-3, 0, 1}, {20, 5, 12}},
        {{4, 4, 25}, {-4, -4, 1.5}},   {{9, 9, 1}, {0, -2, 1}}};
    for (const auto& [a, c] : pairs)
    {
        CHECK(IsLos(a, c, b) == IsLos(c, a, b));
        const unsigned n = CountWallCrossings(a, c, b).count;
        for (std::size_t drop = 0; drop < b.size(); ++drop)
        {
            std::vector<Building> fewer = b;
            fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(drop));
            if (IsLos(a, c, b))
            {
                CHECK(IsLos(a, c, fewer));
            }
        }
        std::vector<Building> moved = b;
        const double dx = 123.25, dy = -47.5;
        for (Building& x : moved)
        {
            for (Point2& p : x.footprint)
            {
                p.x += dx;
                p.y += dy;
            }
        }
        CHECK(CountWallCrossings({a.x + dx, a.y + dy, a.z}, {c.x + dx, c.y + dy, c.z}, moved).count == n);
    }
}

TEST_CASE("convex footprint is crossed 0 or 2 times from outside")
{
    const std::vector<Building> b{{"hex", {{0, 0}, {2, -1}, {4, 0}, {4, 2}, {2, 3}, {0, 2}}, 30.0, 40.0}};
    for (int i = 0; i < 40; ++i)
    {
        const double t = 0.157 * i;
        const Point3 a{2 + 6 * std::cos(t), 1 + 6 * std::sin(t), 1};
        const Point3 c{2 + 6 * std::cos(t + 2.4 + 0.05 * i), 1 + 6 * std::sin(t + 2.4 + 0.05 * i), 1};
        const unsigned n = CountWallCrossings(a, c, b).count;
        CHECK((n == 0 || n == 2));
    }
}

TEST_CASE("validate reports missing donor and nodes inside buildings")
{
    Scenario none = Minimal();
    none.nodes.clear();
    const auto v = Validate(none);
    CHECK(HasRule(v, "no donor gNB"));

    Scenario inside = Minimal();
    inside.buildings.push_back(Box(10, 10, 20, 20));
    inside.nodes.push_back({"ris0", RisSpec{}, {15, 15, 0}, 0});
    const auto w = Validate(inside);
    REQUIRE(HasRule(w, "node inside building"));
    CHECK(w.front().entity.find("ris0") != std::string::npos);
}

TEST_CASE("validate checks specs and geometry")
{
    Scenario s = Minimal();
    GnbSpec loud;
    loud.eirpDbm = 75.0;
    s.nodes.push_back({"gnb1", loud, {1, 1, 10}, 0});
    RisSpec ris;
    ris.bits = 6;
    s.nodes.push_back({"ris0", ris, {2, 2, 6}, 0});
    s.buildings.push_back({"bow", {{0, 0}, {1, 1}, {1, 0}, {0, 1}}, 10.0, 40.0});
    s.grid.spacingM = 0.0;
    const auto v = Validate(s);
    CHECK(v.size() >= 4);
    CHECK(Validate(Minimal()).empty());
}

TEST_CASE("cross-street fixture is valid and has corner shadowing")
{
    const Scenario s = LoadScenario(std::filesystem::path(SMARTEM_TEST_DATA) / "cross-street.json").scenario;
    CHECK(Validate(s).empty());
    CHECK(CountNodes(s, NodeClass::Gnb) == 1);
    CHECK(CountNodes(s, NodeClass::Ris) == 3);
    const Point3 gnb = s.nodes[0].position;
    // Deep in the west side street, behind the corner block.
    const Point3 ue{15.5, 10.5, 1.5};
    CHECK_FALSE(IsLos(gnb, ue, s.buildings));
    CHECK(CountWallCrossings(gnb, ue, s.buildings).count == 2);
    // With the corner block gone the view opens up.
    std::vector<Building> opened;
    for (const Building& b : s.buildings)
    {
        if (!(b.footprint[0].x == 22.0 && b.footprint[0].y == 0.0))
        {
            opened.push_back(b);
        }
    }
    CHECK(opened.size() + 1 == s.buildings.size());
    CHECK(IsLos(gnb, ue, opened));
    // Every RIS sees the gNB.
    for (const PlacedNode& n : s.nodes)
    {
        if (ClassOf(n.spec) == NodeClass::Ris)
        {
            CHECK(IsLos(gnb, n.position, s.buildings));
        }
    }
}

TEST_CASE("indoor points")
{
    const std::vector<Building> b{Box(0, 0, 10, 10, 20.0)};
    CHECK(IsInsideBuilding({5, 5, 1.5}, b));
    CHECK_FALSE(IsInsideBuilding({5, 5, 25}, b));
    CHECK_FALSE(IsInsideBuilding({10, 5, 1.5}, b));
    CHECK_FALSE(IsInsideBuilding({12, 5, 1.5}, b));
}

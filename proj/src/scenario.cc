#include "smartem/scenario.h"

#include "smartem/nodes.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace smartem
{

namespace
{

struct Bounds
{
    double minX, minY, maxX, maxY;
};

Bounds
FootprintBounds(const Building& b)
{
    Bounds out{b.footprint[0].x, b.footprint[0].y, b.footprint[0].x, b.footprint[0].y};
    for (const Point2& p : b.footprint)
    {
        out.minX = std::min(out.minX, p.x);
        out.minY = std::min(out.minY, p.y);
        out.maxX = std::max(out.maxX, p.x);
        out.maxY = std::max(out.maxY, p.y);
    }
    return out;
}

unsigned
CrossingsForContact(const BoundaryContact& c)
{
    if (c.before == PolygonSide::Boundary && c.after == PolygonSide::Boundary)
    {
        return 0;
    }
    if (c.before == PolygonSide::Boundary)
    {
        return c.after == PolygonSide::Inside ? 1 : 0;
    }
    if (c.after == PolygonSide::Boundary)
    {
        return c.before == PolygonSide::Inside ? 1 : 0;
    }
    return c.before == c.after ? 2 : 1;
}

std::string
NodeEntity(const PlacedNode& node, std::size_t index)
{
    return "node " + (node.id.empty() ? "#" + std::to_string(index) : node.id);
}

void
ValidateSpec(const PlacedNode& node,
             const std::string& entity,
             const RadioParams& radio,
             std::vector<Violation>& out)
{
    auto add = [&](std::string rule) { out.push_back({entity, std::move(rule)}); };
    std::visit(
        [&](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, GnbSpec>)
            {
                if (spec.eirpDbm > 70.0)
                {
                    add("gNB EIRP above 70 dBm");
                }
                if (spec.powerW > 800.0)
                {
                    add("gNB power consumption above 800 W");
                }
            }
            else if constexpr (std::is_same_v<T, IabSpec>)
            {
                if (spec.powerW > 350.0)
                {
                    add("IAB power consumption above 350 W");
                }
                if (spec.resourceSplit && !(*spec.resourceSplit > 0.0 && *spec.resourceSplit < 1.0))
                {
                    add("IAB resource split outside (0, 1)");
                }
            }
            else if constexpr (std::is_same_v<T, RepeaterSpec>)
            {
                if (!(spec.maxEirpDbm < 60.0))
                {
                    add("repeater max EIRP not below 60 dBm");
                }
                if (spec.e2eGainDb < 0.0)
                {
                    add("repeater E2E gain negative");
                }
                if (spec.stabilityMarginDb < 0.0)
                {
                    add("repeater stability margin negative");
                }
                if (!(spec.serviceFovDeg > 0.0 && spec.serviceFovDeg <= 360.0))
                {
                    add("repeater service FoV outside (0, 360]");
                }
            }
            else if constexpr (std::is_same_v<T, RisSpec>)
            {
                if (spec.bits < 1 || spec.bits > 4)
                {
                    add("RIS phase bits outside 1..4");
                }
                if (!(spec.elementPowerMw < 1.0) || spec.elementPowerMw < 0.0)
                {
                    add("RIS element power not in [0, 1) mW");
                }
                if (radio.carrierFrequencyHz > 0.0)
                {
                    if (spec.sideM < 0.5 * Wavelength(radio.carrierFrequencyHz))
                    {
                        add("RIS side smaller than one element pitch");
                    }
                    else if (!(PowerConsumptionW(node.spec, radio.carrierFrequencyHz) < 2.0))
                    {
                        add("RIS control power not below 2 W");
                    }
                }
            }
            else if constexpr (std::is_same_v<T, SkinSpec>)
            {
                if (!(spec.sideM > 0.25))
                {
                    add("smart skin side not above 0.25 m");
                }
                if (!(spec.toleranceDeg > 0.0))
                {
                    add("smart skin tolerance not positive");
                }
            }
        },
        node.spec);
}

} // namespace

Point3
UeGrid::PointAt(std::size_t index) const
{
    const std::size_t ix = index % nx;
    const std::size_t iy = index / nx;
    return {origin.x + static_cast<double>(ix) * spacingM,
            origin.y + static_cast<double>(iy) * spacingM,
            ueHeightM};
}

std::vector<Violation>
Validate(const Scenario& scenario)
{
    std::vector<Violation> out;

    for (std::size_t i = 0; i < scenario.buildings.size(); ++i)
    {
        const Building& b = scenario.buildings[i];
        const std::string entity = "building " + (b.id.empty() ? "#" + std::to_string(i) : b.id);
        bool finite = std::all_of(b.footprint.begin(), b.footprint.end(), [](const Point2& p) {
            return std::isfinite(p.x) && std::isfinite(p.y);
        });
        if (b.footprint.size() < 3)
        {
            out.push_back({entity, "footprint has fewer than 3 vertices"});
        }
        else if (!finite)
        {
            out.push_back({entity, "footprint has non-finite coordinates"});
        }
        else if (!IsSimplePolygon(b.footprint))
        {
            out.push_back({entity, "footprint is not a simple polygon"});
        }
        if (!(b.heightM > 0.0))
        {
            out.push_back({entity, "height not positive"});
        }
        if (!(b.penetrationLossDb >= 0.0))
        {
            out.push_back({entity, "penetration loss negative"});
        }
    }

    if (CountNodes(scenario, NodeClass::Gnb) == 0)
    {
        out.push_back({"scenario", "no donor gNB"});
    }

    std::unordered_set<std::string> ids;
    for (std::size_t i = 0; i < scenario.nodes.size(); ++i)
    {
        const PlacedNode& node = scenario.nodes[i];
        const std::string entity = NodeEntity(node, i);
        if (node.id.empty())
        {
            out.push_back({entity, "missing id"});
        }
        else if (!ids.insert(node.id).second)
        {
            out.push_back({entity, "duplicate id"});
        }
        if (!IsFinite(node.position) || !std::isfinite(node.azimuthDeg))
        {
            out.push_back({entity, "non-finite position or azimuth"});
        }
        else if (IsInsideBuilding(node.position, scenario.buildings))
        {
            out.push_back({entity, "node inside building"});
        }
        ValidateSpec(node, entity, scenario.radio, out);
    }

    const UeGrid& grid = scenario.grid;
    if (grid.nx * grid.ny < 1)
    {
        out.push_back({"grid", "grid has no points"});
    }
    if (!(grid.spacingM > 0.0))
    {
        out.push_back({"grid", "spacing not positive"});
    }
    if (!IsFinite(grid.origin) || !std::isfinite(grid.ueHeightM))
    {
        out.push_back({"grid", "non-finite origin or UE height"});
    }

    const RadioParams& radio = scenario.radio;
    if (!(radio.carrierFrequencyHz > 0.0))
    {
        out.push_back({"radio", "carrier frequency not positive"});
    }
    if (!(radio.bandwidthHz > 0.0))
    {
        out.push_back({"radio", "bandwidth not positive"});
    }
    if (!(radio.noiseFigureDb >= 0.0))
    {
        out.push_back({"radio", "noise figure negative"});
    }
    if (!std::isfinite(radio.coverageThresholdDbm) || !std::isfinite(radio.ueAntennaGainDbi))
    {
        out.push_back({"radio", "non-finite threshold or UE gain"});
    }
    return out;
}

WallCrossings
CountWallCrossings(const Point3& a, const Point3& b, std::span<const Building> buildings)
{
    if (a == b)
    {
        throw std::domain_error("wall crossing query needs distinct endpoints");
    }
    WallCrossings result;
    const Point2 a2 = a.Xy();
    const Point2 b2 = b.Xy();
    const double segMinX = std::min(a.x, b.x);
    const double segMaxX = std::max(a.x, b.x);
    const double segMinY = std::min(a.y, b.y);
    const double segMaxY = std::max(a.y, b.y);
    constexpr double pad = 1e-6;
    for (const Building& building : buildings)
    {
        if (building.footprint.size() < 3 || building.heightM <= std::min(a.z, b.z))
        {
            continue;
        }
        const Bounds box = FootprintBounds(building);
        if (box.maxX < segMinX - pad || box.minX > segMaxX + pad || box.maxY < segMinY - pad ||
            box.minY > segMaxY + pad)
        {
            continue;
        }
        for (const BoundaryContact& c : BoundaryContacts(building.footprint, a2, b2))
        {
            const unsigned n = CrossingsForContact(c);
            if (n == 0)
            {
                continue;
            }
            const double zBegin = a.z + c.tBegin * (b.z - a.z);
            const double zEnd = a.z + c.tEnd * (b.z - a.z);
            if (building.heightM > std::min(zBegin, zEnd))
            {
                result.count += n;
                result.penetrationDb += n * building.penetrationLossDb;
            }
        }
    }
    return result;
}

bool
IsLos(const Point3& a, const Point3& b, std::span<const Building> buildings)
{
    return CountWallCrossings(a, b, buildings).count == 0;
}

bool
IsInsideBuilding(const Point3& p, std::span<const Building> buildings)
{
    for (const Building& b : buildings)
    {
        if (b.footprint.size() >= 3 && p.z < b.heightM &&
            ClassifyPoint(b.footprint, p.Xy()) == PolygonSide::Inside)
        {
            return true;
        }
    }
    return false;
}

std::size_t
CountNodes(const Scenario& scenario, NodeClass cls)
{
    return static_cast<std::size_t>(
        std::count_if(scenario.nodes.begin(), scenario.nodes.end(), [cls](const PlacedNode& n) {
            return ClassOf(n.spec) == cls;
        }));
}

} // namespace smartem

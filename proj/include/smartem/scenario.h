#ifndef SMARTEM_SCENARIO_H
#define SMARTEM_SCENARIO_H

#include "smartem/geometry.h"
#include "smartem/node-spec.h"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace smartem
{

/// Extruded footprint. Each wall crossing below the roof costs penetrationLossDb.
struct Building
{
    std::string id;
    std::vector<Point2> footprint;
    double heightM = 0.0;
    double penetrationLossDb = 40.0;
};

struct UeGrid
{
    Point3 origin;
    std::size_t nx = 1;
    std::size_t ny = 1;
    double spacingM = 2.0;
    double ueHeightM = 1.5;

    std::size_t Size() const
    {
        return nx * ny;
    }
    /// Point index i maps to (i % nx, i / nx).
    Point3 PointAt(std::size_t index) const;
};

struct RadioParams
{
    double carrierFrequencyHz = 28e9;
    double bandwidthHz = 400e6;
    double noiseFigureDb = 7.0;
    double ueAntennaGainDbi = 0.0;
    double coverageThresholdDbm = -80.0;
};

struct Scenario
{
    std::vector<Building> buildings;
    std::vector<PlacedNode> nodes;
    UeGrid grid;
    RadioParams radio;
};

struct Violation
{
    std::string entity;
    std::string rule;
};

/// Checks every type invariant; violations are data, never exceptions.
std::vector<Violation> Validate(const Scenario& scenario);

struct WallCrossings
{
    unsigned count = 0;
    double penetrationDb = 0.0;
};

/**
 * Walls crossed by the segment a->b.
 *
 * A boundary contact counts when the building is taller than the segment's
 * interpolated height there. Grazed vertices and collinear overlaps count as
 * two crossings (in and out); a contact at an endpoint lying on a facade
 * counts only when the segment heads into the building.
 *
 * Throws std::domain_error when a == b.
 */
WallCrossings CountWallCrossings(const Point3& a, const Point3& b, std::span<const Building> buildings);

bool IsLos(const Point3& a, const Point3& b, std::span<const Building> buildings);

/// True when p lies strictly inside a footprint and below its roof.
bool IsInsideBuilding(const Point3& p, std::span<const Building> buildings);

std::size_t CountNodes(const Scenario& scenario, NodeClass cls);

} // namespace smartem

#endif // SMARTEM_SCENARIO_H

#ifndef SMARTEM_GEOMETRY_H
#define SMARTEM_GEOMETRY_H

#include <span>
#include <vector>

namespace smartem
{

struct Point2
{
    double x = 0.0;
    double y = 0.0;
};

struct Point3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Point2 Xy() const
    {
        return {x, y};
    }
};

bool operator==(const Point2& a, const Point2& b);
bool operator==(const Point3& a, const Point3& b);

double Distance(const Point3& a, const Point3& b);
double Distance(const Point2& a, const Point2& b);
bool IsFinite(const Point3& p);

/// Azimuth of b seen from a, degrees in (-180, 180], counter-clockwise from +x.
double AzimuthDeg(const Point2& from, const Point2& to);

/// Smallest absolute difference between two azimuths, degrees in [0, 180].
double AzimuthDifferenceDeg(double a, double b);

enum class PolygonSide
{
    Outside,
    Boundary,
    Inside,
};

/// Classifies p against a closed polygon; points within `tolerance` of an edge are Boundary.
PolygonSide ClassifyPoint(std::span<const Point2> polygon, const Point2& p, double tolerance = 1e-9);

/// True when no two non-adjacent edges touch and adjacent edges meet only at their shared vertex.
bool IsSimplePolygon(std::span<const Point2> polygon);

/**
 * Parameters t in [0, 1] along segment a->b where the 2D segment touches the
 * polygon boundary, as clusters of connected contact. A cluster is a single
 * crossing point, a grazed vertex or a collinear overlap with an edge.
 */
struct BoundaryContact
{
    double tBegin = 0.0;
    double tEnd = 0.0;
    PolygonSide before = PolygonSide::Outside;
    PolygonSide after = PolygonSide::Outside;
};

std::vector<BoundaryContact> BoundaryContacts(std::span<const Point2> polygon,
                                              const Point2& a,
                                              const Point2& b);

/// Shortest distance from p to segment [a, b] in 2D.
double PointSegmentDistance(const Point2& p, const Point2& a, const Point2& b);

} // namespace smartem

#endif // SMARTEM_GEOMETRY_H

#include "smartem/geometry.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace smartem
{

namespace
{

double
Cross(double ax, double ay, double bx, double by)
{
    return ax * by - ay * bx;
}

Point2
Lerp(const Point2& a, const Point2& b, double t)
{
    return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

bool
OnSegment(const Point2& p, const Point2& a, const Point2& b, double tolerance)
{
    return PointSegmentDistance(p, a, b) <= tolerance;
}

bool
SegmentsTouch(const Point2& a, const Point2& b, const Point2& c, const Point2& d, double tolerance)
{
    const double d1 = Cross(b.x - a.x, b.y - a.y, c.x - a.x, c.y - a.y);
    const double d2 = Cross(b.x - a.x, b.y - a.y, d.x - a.x, d.y - a.y);
    const double d3 = Cross(d.x - c.x, d.y - c.y, a.x - c.x, a.y - c.y);
    const double d4 = Cross(d.x - c.x, d.y - c.y, b.x - c.x, b.y - c.y);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    {
        return true;
    }
    return OnSegment(c, a, b, tolerance) || OnSegment(d, a, b, tolerance) ||
           OnSegment(a, c, d, tolerance) || OnSegment(b, c, d, tolerance);
}

struct Interval
{
    double begin;
    double end;
};

} // namespace

bool
operator==(const Point2& a, const Point2& b)
{
    return a.x == b.x && a.y == b.y;
}

bool
operator==(const Point3& a, const Point3& b)
{
    return a.x == b.x && a.y == b.y && a.z == b.z;
}

double
Distance(const Point3& a, const Point3& b)
{
    return std::hypot(b.x - a.x, b.y - a.y, b.z - a.z);
}

double
Distance(const Point2& a, const Point2& b)
{
    return std::hypot(b.x - a.x, b.y - a.y);
}

bool
IsFinite(const Point3& p)
{
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

double
AzimuthDeg(const Point2& from, const Point2& to)
{
    return std::atan2(to.y - from.y, to.x - from.x) * 180.0 / std::numbers::pi;
}

double
AzimuthDifferenceDeg(double a, double b)
{
    double diff = std::fmod(std::abs(a - b), 360.0);
    return diff > 180.0 ? 360.0 - diff : diff;
}

double
PointSegmentDistance(const Point2& p, const Point2& a, const Point2& b)
{
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    if (len2 == 0.0)
    {
        return Distance(p, a);
    }
    const double t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
    return Distance(p, Lerp(a, b, t));
}

PolygonSide
ClassifyPoint(std::span<const Point2> polygon, const Point2& p, double tolerance)
{
    const std::size_t n = polygon.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    {
        const Point2& pi = polygon[i];
        const Point2& pj = polygon[j];
        if (OnSegment(p, pj, pi, tolerance))
        {
            return PolygonSide::Boundary;
        }
        if ((pi.y > p.y) != (pj.y > p.y))
        {
            const double xCross = pj.x + (p.y - pj.y) * (pi.x - pj.x) / (pi.y - pj.y);
            if (p.x < xCross)
            {
                inside = !inside;
            }
        }
    }
    return inside ? PolygonSide::Inside : PolygonSide::Outside;
}

bool
IsSimplePolygon(std::span<const Point2> polygon)
{
    const std::size_t n = polygon.size();
    if (n < 3)
    {
        return false;
    }
    constexpr double tol = 1e-12;
    for (std::size_t i = 0; i < n; ++i)
    {
        if (polygon[i] == polygon[(i + 1) % n])
        {
            return false;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
    {
        const Point2& a = polygon[i];
        const Point2& b = polygon[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j)
        {
            const Point2& c = polygon[j];
            const Point2& d = polygon[(j + 1) % n];
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent)
            {
                // Adjacent edges may only share their common vertex: reject folding back.
                const Point2& shared = (j == i + 1) ? b : a;
                const Point2& other1 = (j == i + 1) ? a : b;
                const Point2& other2 = (j == i + 1) ? d : c;
                const double cr = Cross(other1.x - shared.x,
                                        other1.y - shared.y,
                                        other2.x - shared.x,
                                        other2.y - shared.y);
                const double dot = (other1.x - shared.x) * (other2.x - shared.x) +
                                   (other1.y - shared.y) * (other2.y - shared.y);
                if (std::abs(cr) <= tol && dot > 0.0)
                {
                    return false;
                }
                continue;
            }
            if (SegmentsTouch(a, b, c, d, tol))
            {
                return false;
            }
        }
    }
    return true;
}

std::vector<BoundaryContact>
BoundaryContacts(std::span<const Point2> polygon, const Point2& a, const Point2& b)
{
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    std::vector<BoundaryContact> contacts;
    if (len2 == 0.0 || polygon.size() < 3)
    {
        return contacts;
    }
    const double len = std::sqrt(len2);
    constexpr double kDistanceTolerance = 1e-9;
    const double tTol = kDistanceTolerance / len;

    std::vector<Interval> hits;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i)
    {
        const Point2& p = polygon[i];
        const Point2& q = polygon[(i + 1) % n];
        const double ex = q.x - p.x;
        const double ey = q.y - p.y;
        const double denom = Cross(dx, dy, ex, ey);
        const double edgeLen = std::hypot(ex, ey);
        if (std::abs(denom) > 1e-12 * len * edgeLen)
        {
            const double t = Cross(p.x - a.x, p.y - a.y, ex, ey) / denom;
            const double s = Cross(p.x - a.x, p.y - a.y, dx, dy) / denom;
            const double sTol = kDistanceTolerance / edgeLen;
            if (t >= -tTol && t <= 1.0 + tTol && s >= -sTol && s <= 1.0 + sTol)
            {
                const double tc = std::clamp(t, 0.0, 1.0);
                hits.push_back({tc, tc});
            }
            continue;
        }
        // Parallel: only collinear edges contribute (as an overlap interval).
        const double offset = std::abs(Cross(dx, dy, p.x - a.x, p.y - a.y)) / len;
        if (offset > kDistanceTolerance)
        {
            continue;
        }
        const double tp = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
        const double tq = ((q.x - a.x) * dx + (q.y - a.y) * dy) / len2;
        const double lo = std::max(0.0, std::min(tp, tq));
        const double hi = std::min(1.0, std::max(tp, tq));
        if (hi >= lo - tTol)
        {
            hits.push_back({std::clamp(lo, 0.0, 1.0), std::clamp(std::max(lo, hi), 0.0, 1.0)});
        }
    }
    if (hits.empty())
    {
        return contacts;
    }
    std::sort(hits.begin(), hits.end(), [](const Interval& l, const Interval& r) {
        return l.begin < r.begin || (l.begin == r.begin && l.end < r.end);
    });
    std::vector<Interval> merged;
    for (const Interval& h : hits)
    {
        if (!merged.empty() && h.begin <= merged.back().end + tTol)
        {
            merged.back().end = std::max(merged.back().end, h.end);
        }
        else
        {
            merged.push_back(h);
        }
    }

    auto sideOfGap = [&](double from, double to) {
        if (to - from <= tTol)
        {
            return PolygonSide::Boundary;
        }
        return ClassifyPoint(polygon, Lerp(a, b, 0.5 * (from + to)), kDistanceTolerance * 0.5);
    };
    contacts.reserve(merged.size());
    for (std::size_t i = 0; i < merged.size(); ++i)
    {
        const double gapBegin = i == 0 ? 0.0 : merged[i - 1].end;
        const double gapEnd = i + 1 == merged.size() ? 1.0 : merged[i + 1].begin;
        BoundaryContact c;
        c.tBegin = merged[i].begin;
        c.tEnd = merged[i].end;
        c.before = sideOfGap(gapBegin, c.tBegin);
        c.after = sideOfGap(c.tEnd, gapEnd);
        contacts.push_back(c);
    }
    return contacts;
}

} // namespace smartem

#include "smartem/simulate.h"

#include "smartem/nodes.h"
#include "smartem/parallel.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace smartem
{

namespace
{

struct Segment
{
    RelaySegment data;
    bool valid = false;
};

Segment
MakeSegment(const Point3& a, const Point3& b, std::span<const Building> buildings)
{
    Segment s;
    if (a == b)
    {
        return s;
    }
    const WallCrossings walls = CountWallCrossings(a, b, buildings);
    s.data.distanceM = Distance(a, b);
    s.data.penetrationDb = walls.penetrationDb;
    s.data.los = walls.count == 0;
    s.valid = true;
    return s;
}

double
AngleFromNormal(const PlacedNode& node, const Point3& towards)
{
    const double dx = towards.x - node.position.x;
    const double dy = towards.y - node.position.y;
    const double dz = towards.z - node.position.z;
    const double len = std::hypot(dx, dy, dz);
    const double az = node.azimuthDeg * std::numbers::pi / 180.0;
    const double c = (dx * std::cos(az) + dy * std::sin(az)) / len;
    return std::acos(std::clamp(c, -1.0, 1.0));
}

double
EirpOf(const PlacedNode& node)
{
    if (const auto* g = std::get_if<GnbSpec>(&node.spec))
    {
        return g->eirpDbm;
    }
    if (const auto* i = std::get_if<IabSpec>(&node.spec))
    {
        return i->eirpDbm;
    }
    throw std::logic_error("node " + node.id + " is not a transmitter");
}

struct IabBackhaul
{
    bool attached = false;
    double capacityBps = 0.0;
    std::size_t donorGnb = 0;
    std::optional<std::size_t> upstreamIab;
    /// Last backhaul hop, as seen from the IAB node.
    RelaySegment lastHop;
    double lastHopEirpDbm = 0.0;
};

/// Per-scenario data shared by every grid point.
class PathContext
{
  public:
    explicit PathContext(const Scenario& scenario)
        : m_scenario(scenario)
    {
        for (std::size_t i = 0; i < scenario.nodes.size(); ++i)
        {
            switch (ClassOf(scenario.nodes[i].spec))
            {
            case NodeClass::Gnb:
                m_gnbs.push_back(i);
                break;
            case NodeClass::Iab:
                m_iabs.push_back(i);
                break;
            default:
                m_relays.push_back(i);
                break;
            }
        }
        m_feeds.resize(m_gnbs.size() * m_relays.size());
        for (std::size_t g = 0; g < m_gnbs.size(); ++g)
        {
            for (std::size_t r = 0; r < m_relays.size(); ++r)
            {
                m_feeds[g * m_relays.size() + r] =
                    MakeSegment(Node(m_gnbs[g]).position, Node(m_relays[r]).position, scenario.buildings);
            }
        }
        ResolveIabBackhaul();
    }

    /// Visits every path to `ue` in enumeration order.
    template <typename Visitor>
    void ForEachPath(const Point3& ue, Visitor&& visit) const
    {
        const RadioParams& radio = m_scenario.radio;
        for (std::size_t g = 0; g < m_gnbs.size(); ++g)
        {
            const PlacedNode& gnb = Node(m_gnbs[g]);
            const Segment s = MakeSegment(gnb.position, ue, m_scenario.buildings);
            if (!s.valid)
            {
                continue;
            }
            LinkResult link;
            link.path = {PathKind::Direct, m_gnbs[g], std::nullopt, std::nullopt};
            link.terms = LinkBudgetTerms::Compose(EirpOf(gnb),
                                                  FsplDb(s.data.distanceM, radio.carrierFrequencyHz),
                                                  0.0,
                                                  s.data.penetrationDb,
                                                  radio.ueAntennaGainDbi);
            link.snrDb = SnrDb(link.terms.rxPowerDbm, radio.bandwidthHz, radio.noiseFigureDb);
            link.capacityBps = CapacityFromSnrDb(link.snrDb, radio.bandwidthHz);
            link.losFirst = s.data.los;
            link.distanceFirstM = s.data.distanceM;
            Finish(link, ue);
            visit(std::move(link));
        }
        std::vector<Segment> tails(m_relays.size());
        for (std::size_t r = 0; r < m_relays.size(); ++r)
        {
            tails[r] = MakeSegment(Node(m_relays[r]).position, ue, m_scenario.buildings);
        }
        for (std::size_t g = 0; g < m_gnbs.size(); ++g)
        {
            const PlacedNode& gnb = Node(m_gnbs[g]);
            for (std::size_t r = 0; r < m_relays.size(); ++r)
            {
                const Segment& feed = m_feeds[g * m_relays.size() + r];
                if (!feed.valid || !tails[r].valid)
                {
                    continue;
                }
                const PlacedNode& node = Node(m_relays[r]);
                RelayGeometry geometry;
                geometry.first = feed.data;
                geometry.second = tails[r].data;
                geometry.incidentRad = AngleFromNormal(node, gnb.position);
                geometry.departureRad = AngleFromNormal(node, ue);
                geometry.incidentAzimuthDeg = AzimuthDeg(node.position.Xy(), gnb.position.Xy());
                geometry.departureAzimuthDeg = AzimuthDeg(node.position.Xy(), ue.Xy());
                const auto relayed = ComposeRelayPath(EirpOf(gnb), node, geometry, radio);
                if (!relayed)
                {
                    continue;
                }
                LinkResult link;
                link.path = {PathKind::Relayed, m_gnbs[g], m_relays[r], std::nullopt};
                link.terms = relayed->terms;
                link.snrDb = SnrDb(link.terms.rxPowerDbm, radio.bandwidthHz, radio.noiseFigureDb) -
                             relayed->snrPenaltyDb;
                link.capacityBps = RelayedCapacityBps(*relayed, node, radio);
                link.losFirst = feed.data.los;
                link.losSecond = tails[r].data.los;
                link.distanceFirstM = feed.data.distanceM;
                link.distanceSecondM = tails[r].data.distanceM;
                Finish(link, ue);
                visit(std::move(link));
            }
        }
        for (std::size_t k = 0; k < m_iabs.size(); ++k)
        {
            const IabBackhaul& bh = m_backhaul[k];
            if (!bh.attached)
            {
                continue;
            }
            const PlacedNode& node = Node(m_iabs[k]);
            const Segment tail = MakeSegment(node.position, ue, m_scenario.buildings);
            if (!tail.valid)
            {
                continue;
            }
            RelayGeometry geometry;
            geometry.first = bh.lastHop;
            geometry.second = tail.data;
            geometry.backhaulCapacityBps = bh.capacityBps;
            const auto relayed = ComposeRelayPath(bh.lastHopEirpDbm, node, geometry, radio);
            LinkResult link;
            link.path = {PathKind::Relayed, bh.donorGnb, m_iabs[k], bh.upstreamIab};
            link.terms = relayed->terms;
            link.snrDb = SnrDb(link.terms.rxPowerDbm, radio.bandwidthHz, radio.noiseFigureDb);
            link.capacityBps = RelayedCapacityBps(*relayed, node, radio);
            link.losFirst = bh.lastHop.los;
            link.losSecond = tail.data.los;
            link.distanceFirstM = bh.lastHop.distanceM;
            link.distanceSecondM = tail.data.distanceM;
            Finish(link, ue);
            visit(std::move(link));
        }
    }

  private:
    const PlacedNode& Node(std::size_t i) const
    {
        return m_scenario.nodes[i];
    }

    static void Finish(LinkResult& link, const Point3& ue)
    {
        link.position = ue;
        link.rxPowerDbm = link.terms.rxPowerDbm;
    }

    double HopCapacity(double eirp, const RelaySegment& hop, const IabSpec& rx, double* rxPower) const
    {
        const RadioParams& radio = m_scenario.radio;
        *rxPower = eirp - FsplDb(hop.distanceM, radio.carrierFrequencyHz) - hop.penetrationDb + rx.antennaGainDbi;
        return ShannonCapacityBps(*rxPower, radio.bandwidthHz, radio.noiseFigureDb);
    }

    /// Best backhaul per IAB: direct from a gNB, or through one directly attached IAB.
    void ResolveIabBackhaul()
    {
        const double threshold = m_scenario.radio.coverageThresholdDbm;
        m_backhaul.assign(m_iabs.size(), {});
        for (std::size_t k = 0; k < m_iabs.size(); ++k)
        {
            const PlacedNode& node = Node(m_iabs[k]);
            const auto& spec = std::get<IabSpec>(node.spec);
            IabBackhaul& best = m_backhaul[k];
            for (std::size_t g = 0; g < m_gnbs.size(); ++g)
            {
                const PlacedNode& gnb = Node(m_gnbs[g]);
                const Segment hop = MakeSegment(gnb.position, node.position, m_scenario.buildings);
                if (!hop.valid)
                {
                    continue;
                }
                double rx = 0.0;
                const double c = HopCapacity(EirpOf(gnb), hop.data, spec, &rx);
                if (rx >= threshold && (!best.attached || c > best.capacityBps))
                {
                    best = {true, c, m_gnbs[g], std::nullopt, hop.data, EirpOf(gnb)};
                }
            }
        }
        const std::vector<IabBackhaul> direct = m_backhaul;
        for (std::size_t k = 0; k < m_iabs.size(); ++k)
        {
            const PlacedNode& node = Node(m_iabs[k]);
            const auto& spec = std::get<IabSpec>(node.spec);
            IabBackhaul& best = m_backhaul[k];
            for (std::size_t m = 0; m < m_iabs.size(); ++m)
            {
                if (m == k || !direct[m].attached)
                {
                    continue;
                }
                const PlacedNode& upstream = Node(m_iabs[m]);
                const Segment hop = MakeSegment(upstream.position, node.position, m_scenario.buildings);
                if (!hop.valid)
                {
                    continue;
                }
                double rx = 0.0;
                const double hopCapacity = HopCapacity(EirpOf(upstream), hop.data, spec, &rx);
                const auto& upstreamSpec = std::get<IabSpec>(upstream.spec);
                const double c = IabEndToEndCapacity(direct[m].capacityBps, hopCapacity, upstreamSpec.resourceSplit);
                if (rx >= threshold && (!best.attached || c > best.capacityBps))
                {
                    best = {true, c, direct[m].donorGnb, m_iabs[m], hop.data, EirpOf(upstream)};
                }
            }
        }
    }

    const Scenario& m_scenario;
    std::vector<std::size_t> m_gnbs;
    std::vector<std::size_t> m_relays;
    std::vector<std::size_t> m_iabs;
    std::vector<Segment> m_feeds;
    std::vector<IabBackhaul> m_backhaul;
};

std::vector<double>
SortedCopy(std::span<const double> values)
{
    if (values.empty())
    {
        throw std::domain_error("CDF of an empty sample");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return sorted;
}

double
QuantileSorted(const std::vector<double>& sorted, double probability)
{
    const double n = static_cast<double>(sorted.size());
    const double rank = std::ceil(std::clamp(probability, 0.0, 1.0) * n - 1e-9);
    const auto index = static_cast<std::size_t>(std::clamp(rank - 1.0, 0.0, n - 1.0));
    return sorted[index];
}

double
FractionAtMost(const std::vector<double>& sorted, double value)
{
    const auto count = std::upper_bound(sorted.begin(), sorted.end(), value) - sorted.begin();
    return static_cast<double>(count) / static_cast<double>(sorted.size());
}

bool
SameGrid(const UeGrid& a, const UeGrid& b)
{
    return a.origin == b.origin && a.nx == b.nx && a.ny == b.ny && a.spacingM == b.spacingM &&
           a.ueHeightM == b.ueHeightM;
}

} // namespace

std::string
DescribePath(const ServingPath& path, const Scenario& scenario)
{
    if (path.kind == PathKind::None)
    {
        return "none";
    }
    std::string out = scenario.nodes[path.source].id;
    if (path.upstreamIab)
    {
        out += ">" + scenario.nodes[*path.upstreamIab].id;
    }
    if (path.node)
    {
        out += ">" + scenario.nodes[*path.node].id;
    }
    return out;
}

std::vector<double>
DefaultPercentileGrid()
{
    return {0.05, kCellEdgeProbability, 0.25, 0.50, 0.75, 0.90, 0.95};
}

const PercentileRow&
CoverageReport::Percentile(double probability) const
{
    for (const PercentileRow& row : percentiles)
    {
        if (std::abs(row.probability - probability) < 1e-12)
        {
            return row;
        }
    }
    throw std::out_of_range("percentile not tabulated: " + std::to_string(probability));
}

std::vector<LinkResult>
EnumerateLinks(const Scenario& scenario, const Point3& ue)
{
    const PathContext context(scenario);
    std::vector<LinkResult> links;
    context.ForEachPath(ue, [&](LinkResult&& link) { links.push_back(std::move(link)); });
    return links;
}

CoverageReport
EvaluateGrid(const Scenario& scenario, const EvaluateOptions& options)
{
    const PathContext context(scenario);
    const UeGrid& grid = scenario.grid;

    std::vector<std::size_t> outdoor;
    outdoor.reserve(grid.Size());
    for (std::size_t i = 0; i < grid.Size(); ++i)
    {
        if (!IsInsideBuilding(grid.PointAt(i), scenario.buildings))
        {
            outdoor.push_back(i);
        }
    }

    CoverageReport report;
    report.grid = grid;
    report.thresholdDbm = scenario.radio.coverageThresholdDbm;
    report.indoorPoints = grid.Size() - outdoor.size();
    report.points.resize(outdoor.size());
    ParallelFor(
        outdoor.size(),
        [&](std::size_t k) {
            const Point3 ue = grid.PointAt(outdoor[k]);
            LinkResult best;
            best.rxPowerDbm = -std::numeric_limits<double>::infinity();
            best.terms.rxPowerDbm = best.rxPowerDbm;
            best.snrDb = best.rxPowerDbm;
            best.position = ue;
            context.ForEachPath(ue, [&](LinkResult&& link) {
                if (link.rxPowerDbm > best.rxPowerDbm)
                {
                    best = std::move(link);
                }
            });
            best.ueIndex = outdoor[k];
            report.points[k] = std::move(best);
        },
        options.workers);

    for (const LinkResult& p : report.points)
    {
        if (p.rxPowerDbm >= report.thresholdDbm)
        {
            ++report.coveredPoints;
        }
    }
    if (!report.points.empty())
    {
        report.coverageFraction =
            static_cast<double>(report.coveredPoints) / static_cast<double>(report.points.size());
        const std::vector<double> power = SortedCopy(RxPowers(report));
        const std::vector<double> capacity = SortedCopy(Capacities(report));
        for (double p : DefaultPercentileGrid())
        {
            report.percentiles.push_back({p, QuantileSorted(power, p), QuantileSorted(capacity, p)});
        }
    }
    return report;
}

std::vector<CdfPoint>
EmpiricalCdf(std::span<const double> values)
{
    const std::vector<double> sorted = SortedCopy(values);
    std::vector<CdfPoint> out;
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
    {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i])
        {
            continue;
        }
        out.push_back({sorted[i], static_cast<double>(i + 1) / n});
    }
    return out;
}

double
Quantile(std::span<const double> values, double probability)
{
    return QuantileSorted(SortedCopy(values), probability);
}

std::vector<CdfPoint>
Cdf(std::span<const double> values, std::span<const double> probabilities)
{
    const std::vector<double> sorted = SortedCopy(values);
    std::vector<CdfPoint> out;
    out.reserve(probabilities.size());
    for (double p : probabilities)
    {
        const double v = QuantileSorted(sorted, p);
        out.push_back({v, FractionAtMost(sorted, v)});
    }
    return out;
}

std::vector<double>
RxPowers(const CoverageReport& report)
{
    std::vector<double> out;
    out.reserve(report.points.size());
    for (const LinkResult& p : report.points)
    {
        out.push_back(p.rxPowerDbm);
    }
    return out;
}

std::vector<double>
Capacities(const CoverageReport& report)
{
    std::vector<double> out;
    out.reserve(report.points.size());
    for (const LinkResult& p : report.points)
    {
        out.push_back(p.capacityBps);
    }
    return out;
}

DeltaReport
CompareReports(const CoverageReport& before, const CoverageReport& after)
{
    if (!SameGrid(before.grid, after.grid) || before.points.size() != after.points.size())
    {
        throw std::domain_error("coverage reports were computed on different grids");
    }
    DeltaReport delta;
    delta.coverageDelta = after.coverageFraction - before.coverageFraction;
    for (std::size_t i = 0; i < before.percentiles.size() && i < after.percentiles.size(); ++i)
    {
        const PercentileRow& b = before.percentiles[i];
        const PercentileRow& a = after.percentiles[i];
        PercentileDelta d;
        d.probability = b.probability;
        d.rxPowerDeltaDb = a.rxPowerDbm - b.rxPowerDbm;
        d.capacityDeltaBps = a.capacityBps - b.capacityBps;
        d.capacityRatio = b.capacityBps > 0.0 ? a.capacityBps / b.capacityBps
                                              : std::numeric_limits<double>::infinity();
        delta.percentiles.push_back(d);
        if (std::abs(d.probability - kCellEdgeProbability) < 1e-12)
        {
            delta.cellEdgePowerDeltaDb = d.rxPowerDeltaDb;
        }
        if (std::abs(d.probability - 0.5) < 1e-12)
        {
            delta.medianCapacityRatio = d.capacityRatio;
        }
    }
    return delta;
}

Scenario
GnbOnly(const Scenario& scenario)
{
    Scenario out = scenario;
    out.nodes.clear();
    for (const PlacedNode& n : scenario.nodes)
    {
        if (ClassOf(n.spec) == NodeClass::Gnb)
        {
            out.nodes.push_back(n);
        }
    }
    return out;
}

} // namespace smartem

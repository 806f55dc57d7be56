#ifndef SMARTEM_SIMULATE_H
#define SMARTEM_SIMULATE_H

#include "smartem/em-core.h"
#include "smartem/scenario.h"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace smartem
{

enum class PathKind
{
    None,
    Direct,
    Relayed,
};

/**
 * How a UE is served. Direct: gNB `source`. Relayed: gNB `source` through
 * `node`; for IAB nodes `source` is the donor gNB and `upstreamIab` the
 * intermediate IAB of a two-hop backhaul, if any.
 */
struct ServingPath
{
    PathKind kind = PathKind::None;
    std::size_t source = 0;
    std::optional<std::size_t> node;
    std::optional<std::size_t> upstreamIab;
};

/// Stable identifier such as "gnb0" or "gnb0>ris1" or "gnb0>iab1>iab2".
std::string DescribePath(const ServingPath& path, const Scenario& scenario);

struct LinkResult
{
    std::size_t ueIndex = 0;
    Point3 position;
    ServingPath path;
    LinkBudgetTerms terms;
    double rxPowerDbm = 0.0;
    double snrDb = 0.0;
    double capacityBps = 0.0;
    bool losFirst = false;
    bool losSecond = false;
    /// Direct paths use distanceFirstM only.
    double distanceFirstM = 0.0;
    double distanceSecondM = 0.0;
};

struct PercentileRow
{
    double probability = 0.0;
    double rxPowerDbm = 0.0;
    double capacityBps = 0.0;
};

/// Bottom decile of the received power distribution.
inline constexpr double kCellEdgeProbability = 0.10;

std::vector<double> DefaultPercentileGrid();

struct CoverageReport
{
    UeGrid grid;
    double thresholdDbm = 0.0;
    /// Outdoor grid points in ascending grid index; indoor points are not evaluated.
    std::vector<LinkResult> points;
    std::size_t indoorPoints = 0;
    std::size_t coveredPoints = 0;
    double coverageFraction = 0.0;
    std::vector<PercentileRow> percentiles;

    const PercentileRow& Percentile(double probability) const;
};

struct EvaluateOptions
{
    /// 0 selects WorkerCount().
    std::size_t workers = 0;
};

/**
 * Every path the simulator considers for a UE at `ue`, in enumeration order:
 * direct links from each gNB, then each gNB through each repeater/RIS/skin,
 * then each attached IAB node. Paths a node cannot serve are omitted.
 */
std::vector<LinkResult> EnumerateLinks(const Scenario& scenario, const Point3& ue);

/// Best path per outdoor grid point (maximum rx power, first in enumeration order on ties).
CoverageReport EvaluateGrid(const Scenario& scenario, const EvaluateOptions& options = {});

struct CdfPoint
{
    double value = 0.0;
    double probability = 0.0;
};

/// Step points of the right-continuous empirical CDF, one per distinct value.
std::vector<CdfPoint> EmpiricalCdf(std::span<const double> values);

/// Smallest sample v with F(v) >= p. Throws std::domain_error for empty input.
double Quantile(std::span<const double> values, double probability);

/// (Quantile(p), F(Quantile(p))) for each p. Throws std::domain_error for empty input.
std::vector<CdfPoint> Cdf(std::span<const double> values, std::span<const double> probabilities);

std::vector<double> RxPowers(const CoverageReport& report);
std::vector<double> Capacities(const CoverageReport& report);

struct PercentileDelta
{
    double probability = 0.0;
    double rxPowerDeltaDb = 0.0;
    double capacityDeltaBps = 0.0;
    double capacityRatio = 0.0;
};

struct DeltaReport
{
    double coverageDelta = 0.0;
    double cellEdgePowerDeltaDb = 0.0;
    double medianCapacityRatio = 0.0;
    std::vector<PercentileDelta> percentiles;
};

/// after - before. Throws std::domain_error when the reports use different grids.
DeltaReport CompareReports(const CoverageReport& before, const CoverageReport& after);

/// Copy of the scenario keeping only its gNBs.
Scenario GnbOnly(const Scenario& scenario);

} // namespace smartem

#endif // SMARTEM_SIMULATE_H

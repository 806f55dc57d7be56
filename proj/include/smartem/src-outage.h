#ifndef SMARTEM_SRC_OUTAGE_H
#define SMARTEM_SRC_OUTAGE_H

#include "smartem/geometry.h"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace smartem
{

/**
 * Counter-based generator: the stream for (seed, counter) is fixed, so trial
 * k draws the same numbers whichever worker runs it.
 */
class CounterRng
{
  public:
    CounterRng(std::uint64_t seed, std::uint64_t counter);

    std::uint64_t Next();
    /// Uniform in [0, 1) with 53 random bits.
    double Uniform();
    double Uniform(double lo, double hi);
    /// Exponential with unit rate.
    double Exponential();
    /// Poisson(mean) by summing unit exponentials.
    std::size_t Poisson(double mean);

  private:
    std::uint64_t m_state;
};

/// A UE at the origin served over two paths leaving it at different azimuths.
struct SrcGeometry
{
    double primaryLengthM = 50.0;
    double reflectedLengthM = 30.0;
    double primaryAzimuthDeg = 0.0;
    double separationDeg = 90.0;
};

/// Homogeneous Poisson disks with radius uniform in [minRadiusM, maxRadiusM].
struct ObstacleProcess
{
    double densityPerM2 = 0.01;
    double minRadiusM = 0.3;
    double maxRadiusM = 0.3;
};

struct SrcOptions
{
    ObstacleProcess obstacles;
    double selfBlockageWidthDeg = 60.0;
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    std::size_t workers = 0;
};

struct Disk
{
    Point2 center;
    double radiusM = 0.0;
};

enum class SrcOutcome
{
    BothUp,
    OneUp,
    Outage,
};

struct SrcTrial
{
    Point2 primaryEnd;
    Point2 reflectedEnd;
    std::vector<Disk> obstacles;
    /// Centre azimuth of the body sector at the UE.
    double selfBlockageCenterDeg = 0.0;
    double selfBlockageWidthDeg = 0.0;
    bool primaryBlocked = false;
    bool reflectedBlocked = false;
    SrcOutcome outcome = SrcOutcome::BothUp;
};

/// Draws trial number `index` of the experiment; depends only on (seed, index).
SrcTrial DrawSrcTrial(const SrcGeometry& geometry, const SrcOptions& options, std::uint64_t index);

/// True when a disk touches the segment from the origin to `end` or the path leaves inside the sector.
bool IsPathBlocked(const Point2& end, std::span<const Disk> obstacles, double sectorCenterDeg, double sectorWidthDeg);

struct ProportionInterval
{
    double estimate = 0.0;
    double low = 0.0;
    double high = 0.0;
};

/// Wilson score interval for k successes out of n (z = 1.96 for 95%).
ProportionInterval WilsonInterval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

struct SrcEstimate
{
    SrcGeometry geometry;
    std::size_t trials = 0;
    std::size_t outages = 0;
    std::size_t oneUp = 0;
    std::size_t primaryBlocked = 0;
    ProportionInterval outage;
    /// Blocking of the primary path alone, useful for single-link studies.
    ProportionInterval primary;
};

SrcEstimate EstimateSrcOutage(const SrcGeometry& geometry, const SrcOptions& options);

/// Outage for each separation angle, same seed for every row.
std::vector<SrcEstimate> SweepSeparation(SrcGeometry geometry, std::span<const double> separationsDeg, const SrcOptions& options);

/**
 * Outage against link length: both paths are set to each length in turn.
 * Rows come back sorted by length. Throws std::domain_error for lengths <= 0.
 */
std::vector<SrcEstimate> LinkLengthSensitivity(SrcGeometry geometry, std::span<const double> lengthsM, const SrcOptions& options);

} // namespace smartem

#endif // SMARTEM_SRC_OUTAGE_H

#include "smartem/src-outage.h"

#include "smartem/parallel.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace smartem
{

namespace
{

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t
Mix(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Point2
PathEnd(double lengthM, double azimuthDeg)
{
    const double a = azimuthDeg * std::numbers::pi / 180.0;
    return {lengthM * std::cos(a), lengthM * std::sin(a)};
}

} // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t counter)
    : m_state(Mix(seed ^ Mix(counter + kGolden)))
{
}

std::uint64_t
CounterRng::Next()
{
    m_state += kGolden;
    return Mix(m_state);
}

double
CounterRng::Uniform()
{
    return static_cast<double>(Next() >> 11) * 0x1.0p-53;
}

double
CounterRng::Uniform(double lo, double hi)
{
    return lo + (hi - lo) * Uniform();
}

double
CounterRng::Exponential()
{
    return -std::log1p(-Uniform());
}

std::size_t
CounterRng::Poisson(double mean)
{
    std::size_t count = 0;
    double sum = Exponential();
    while (sum <= mean)
    {
        ++count;
        sum += Exponential();
    }
    return count;
}

bool
IsPathBlocked(const Point2& end, std::span<const Disk> obstacles, double sectorCenterDeg, double sectorWidthDeg)
{
    const Point2 origin{0.0, 0.0};
    if (sectorWidthDeg > 0.0 &&
        AzimuthDifferenceDeg(AzimuthDeg(origin, end), sectorCenterDeg) <= 0.5 * sectorWidthDeg)
    {
        return true;
    }
    return std::any_of(obstacles.begin(), obstacles.end(), [&](const Disk& d) {
        return PointSegmentDistance(d.center, origin, end) <= d.radiusM;
    });
}

SrcTrial
DrawSrcTrial(const SrcGeometry& geometry, const SrcOptions& options, std::uint64_t index)
{
    CounterRng rng(options.seed, index);
    SrcTrial trial;
    trial.primaryEnd = PathEnd(geometry.primaryLengthM, geometry.primaryAzimuthDeg);
    trial.reflectedEnd = PathEnd(geometry.reflectedLengthM, geometry.primaryAzimuthDeg + geometry.separationDeg);
    trial.selfBlockageWidthDeg = options.selfBlockageWidthDeg;
    trial.selfBlockageCenterDeg = rng.Uniform(-180.0, 180.0);

    const ObstacleProcess& process = options.obstacles;
    const double pad = process.maxRadiusM;
    const double x0 = std::min({0.0, trial.primaryEnd.x, trial.reflectedEnd.x}) - pad;
    const double x1 = std::max({0.0, trial.primaryEnd.x, trial.reflectedEnd.x}) + pad;
    const double y0 = std::min({0.0, trial.primaryEnd.y, trial.reflectedEnd.y}) - pad;
    const double y1 = std::max({0.0, trial.primaryEnd.y, trial.reflectedEnd.y}) + pad;
    const std::size_t count =
        process.densityPerM2 > 0.0 ? rng.Poisson(process.densityPerM2 * (x1 - x0) * (y1 - y0)) : 0;
    trial.obstacles.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
    {
        Disk d;
        d.center.x = rng.Uniform(x0, x1);
        d.center.y = rng.Uniform(y0, y1);
        d.radiusM = rng.Uniform(process.minRadiusM, process.maxRadiusM);
        trial.obstacles.push_back(d);
    }

    trial.primaryBlocked =
        IsPathBlocked(trial.primaryEnd, trial.obstacles, trial.selfBlockageCenterDeg, trial.selfBlockageWidthDeg);
    trial.reflectedBlocked =
        IsPathBlocked(trial.reflectedEnd, trial.obstacles, trial.selfBlockageCenterDeg, trial.selfBlockageWidthDeg);
    if (trial.primaryBlocked && trial.reflectedBlocked)
    {
        trial.outcome = SrcOutcome::Outage;
    }
    else if (trial.primaryBlocked || trial.reflectedBlocked)
    {
        trial.outcome = SrcOutcome::OneUp;
    }
    return trial;
}

ProportionInterval
WilsonInterval(std::size_t successes, std::size_t trials, double z)
{
    if (trials == 0)
    {
        throw std::domain_error("Wilson interval needs at least one trial");
    }
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
    const double low = successes == 0 ? 0.0 : std::max(0.0, centre - half);
    const double high = successes == trials ? 1.0 : std::min(1.0, centre + half);
    return {p, low, high};
}

SrcEstimate
EstimateSrcOutage(const SrcGeometry& geometry, const SrcOptions& options)
{
    if (options.trials == 0)
    {
        throw std::domain_error("SRC estimate needs at least one trial");
    }
    const ObstacleProcess& process = options.obstacles;
    if (process.densityPerM2 < 0.0 || process.minRadiusM < 0.0 || process.maxRadiusM < process.minRadiusM)
    {
        throw std::domain_error("invalid obstacle process");
    }
    std::vector<SrcOutcome> outcomes(options.trials);
    std::vector<char> primary(options.trials);
    ParallelFor(
        options.trials,
        [&](std::size_t i) {
            const SrcTrial t = DrawSrcTrial(geometry, options, i);
            outcomes[i] = t.outcome;
            primary[i] = t.primaryBlocked;
        },
        options.workers);

    SrcEstimate est;
    est.geometry = geometry;
    est.trials = options.trials;
    for (std::size_t i = 0; i < options.trials; ++i)
    {
        est.outages += outcomes[i] == SrcOutcome::Outage;
        est.oneUp += outcomes[i] == SrcOutcome::OneUp;
        est.primaryBlocked += primary[i] != 0;
    }
    est.outage = WilsonInterval(est.outages, est.trials);
    est.primary = WilsonInterval(est.primaryBlocked, est.trials);
    return est;
}

std::vector<SrcEstimate>
SweepSeparation(SrcGeometry geometry, std::span<const double> separationsDeg, const SrcOptions& options)
{
    std::vector<SrcEstimate> rows;
    for (double s : separationsDeg)
    {
        geometry.separationDeg = s;
        rows.push_back(EstimateSrcOutage(geometry, options));
    }
    return rows;
}

std::vector<SrcEstimate>
LinkLengthSensitivity(SrcGeometry geometry, std::span<const double> lengthsM, const SrcOptions& options)
{
    std::vector<double> lengths(lengthsM.begin(), lengthsM.end());
    for (double l : lengths)
    {
        if (!(l > 0.0))
        {
            throw std::domain_error("link lengths must be positive");
        }
    }
    std::sort(lengths.begin(), lengths.end());
    std::vector<SrcEstimate> rows;
    for (double l : lengths)
    {
        geometry.primaryLengthM = l;
        geometry.reflectedLengthM = l;
        rows.push_back(EstimateSrcOutage(geometry, options));
    }
    return rows;
}

} // namespace smartem

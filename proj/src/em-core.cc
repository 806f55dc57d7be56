#include "smartem/em-core.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace smartem
{

namespace
{

double
LedgerSum(double eirp, double pathLoss, double extra, double penetration, double rxGain)
{
    return eirp - pathLoss + extra - penetration + rxGain;
}

} // namespace

double
DbToLinear(double db)
{
    return std::pow(10.0, db / 10.0);
}

double
LinearToDb(double linear)
{
    return 10.0 * std::log10(linear);
}

double
Wavelength(double frequencyHz)
{
    if (!(frequencyHz > 0.0))
    {
        throw std::domain_error("frequency must be positive, got " + std::to_string(frequencyHz));
    }
    return kSpeedOfLight / frequencyHz;
}

double
FsplDb(double distanceM, double frequencyHz)
{
    if (!(distanceM > 0.0))
    {
        throw std::domain_error("distance must be positive, got " + std::to_string(distanceM));
    }
    if (!(frequencyHz > 0.0))
    {
        throw std::domain_error("frequency must be positive, got " + std::to_string(frequencyHz));
    }
    return 20.0 * std::log10(4.0 * std::numbers::pi * distanceM * frequencyHz / kSpeedOfLight);
}

double
NoisePowerDbm(double bandwidthHz, double noiseFigureDb)
{
    if (!(bandwidthHz > 0.0))
    {
        throw std::domain_error("bandwidth must be positive, got " + std::to_string(bandwidthHz));
    }
    return kThermalNoiseDbmPerHz + 10.0 * std::log10(bandwidthHz) + noiseFigureDb;
}

double
SnrDb(double rxPowerDbm, double bandwidthHz, double noiseFigureDb)
{
    return rxPowerDbm - NoisePowerDbm(bandwidthHz, noiseFigureDb);
}

double
CapacityFromSnrDb(double snrDb, double bandwidthHz)
{
    if (!(bandwidthHz > 0.0))
    {
        throw std::domain_error("bandwidth must be positive, got " + std::to_string(bandwidthHz));
    }
    // log1p keeps deep-fade capacities positive instead of rounding to zero.
    return bandwidthHz * std::log1p(DbToLinear(snrDb)) / std::numbers::ln2;
}

double
ShannonCapacityBps(double rxPowerDbm, double bandwidthHz, double noiseFigureDb)
{
    return CapacityFromSnrDb(SnrDb(rxPowerDbm, bandwidthHz, noiseFigureDb), bandwidthHz);
}

LinkBudgetTerms
LinkBudgetTerms::Compose(double eirpDbm,
                         double pathLossDb,
                         double extraGainDb,
                         double penetrationDb,
                         double rxGainDbi)
{
    LinkBudgetTerms terms;
    terms.eirpDbm = eirpDbm;
    terms.pathLossDb = pathLossDb;
    terms.extraGainDb = extraGainDb;
    terms.penetrationDb = penetrationDb;
    terms.rxGainDbi = rxGainDbi;
    terms.rxPowerDbm = LedgerSum(eirpDbm, pathLossDb, extraGainDb, penetrationDb, rxGainDbi);
    return terms;
}

bool
LinkBudgetTerms::LedgerHolds() const
{
    return rxPowerDbm == LedgerSum(eirpDbm, pathLossDb, extraGainDb, penetrationDb, rxGainDbi);
}

} // namespace smartem

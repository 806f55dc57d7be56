#include "smartem/nodes.h"

#include "smartem/arrays.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace smartem
{

std::string_view
ToString(NodeClass cls)
{
    switch (cls)
    {
    case NodeClass::Gnb:
        return "gnb";
    case NodeClass::Iab:
        return "iab";
    case NodeClass::Repeater:
        return "repeater";
    case NodeClass::Ris:
        return "ris";
    case NodeClass::Skin:
        return "skin";
    }
    return "unknown";
}

std::optional<NodeClass>
NodeClassFromString(std::string_view name)
{
    for (NodeClass cls : kAllNodeClasses)
    {
        if (ToString(cls) == name)
        {
            return cls;
        }
    }
    return std::nullopt;
}

NodeClass
ClassOf(const NodeSpec& spec)
{
    return static_cast<NodeClass>(spec.index());
}

double
PowerConsumptionW(const NodeSpec& spec, double frequencyHz)
{
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, RisSpec>)
            {
                return RisControlPowerMw(s, frequencyHz) / 1000.0;
            }
            else if constexpr (std::is_same_v<T, SkinSpec>)
            {
                return 0.0;
            }
            else
            {
                return s.powerW;
            }
        },
        spec);
}

RisElementCount
CountRisElements(const RisSpec& spec, double frequencyHz)
{
    const double pitch = 0.5 * Wavelength(frequencyHz);
    const double ratio = spec.sideM / pitch;
    if (!(ratio >= 1.0 - 1e-12))
    {
        throw std::domain_error("RIS side " + std::to_string(spec.sideM) + " m is smaller than one element pitch");
    }
    RisElementCount count;
    count.perSide = static_cast<std::size_t>(std::floor(ratio + 1e-12));
    count.total = count.perSide * count.perSide;
    return count;
}

double
RisControlPowerMw(const RisSpec& spec, double frequencyHz)
{
    return static_cast<double>(CountRisElements(spec, frequencyHz).total) * spec.elementPowerMw;
}

double
RisBistaticGainDb(double sideM, double frequencyHz, double incidentRad, double departureRad, unsigned bits)
{
    constexpr double kHalfPi = 0.5 * std::numbers::pi;
    for (double angle : {incidentRad, departureRad})
    {
        if (!(angle >= 0.0 && angle < kHalfPi))
        {
            throw std::domain_error("surface angle must lie in [0, 90) degrees from the normal");
        }
    }
    const double lambda = Wavelength(frequencyHz);
    const double aperture = 4.0 * std::numbers::pi * sideM * sideM / (lambda * lambda);
    const double gain = 10.0 * std::log10(aperture * aperture * std::cos(incidentRad) * std::cos(departureRad)) -
                        ExpectedQuantizationLossDb(bits);
    return std::max(0.0, gain);
}

double
RisBistaticGainDb(const RisSpec& spec, double frequencyHz, double incidentRad, double departureRad, unsigned bits)
{
    return RisBistaticGainDb(spec.sideM, frequencyHz, incidentRad, departureRad, bits);
}

RepeaterGain
RepeaterEffectiveGainDb(const RepeaterSpec& spec)
{
    const double ceiling = spec.isolationDb - spec.stabilityMarginDb;
    if (ceiling <= 0.0)
    {
        return {std::nullopt, RepeaterStatus::Off};
    }
    if (spec.e2eGainDb <= ceiling)
    {
        return {spec.e2eGainDb, RepeaterStatus::Nominal};
    }
    return {ceiling, RepeaterStatus::Reduced};
}

double
IabEndToEndCapacity(double backhaulBps, double accessBps, std::optional<double> backhaulShare)
{
    if (backhaulBps <= 0.0 || accessBps <= 0.0)
    {
        return 0.0;
    }
    if (backhaulShare)
    {
        return std::min(*backhaulShare * backhaulBps, (1.0 - *backhaulShare) * accessBps);
    }
    return accessBps * (backhaulBps / (accessBps + backhaulBps));
}

double
IabOptimalShare(double backhaulBps, double accessBps)
{
    return accessBps / (accessBps + backhaulBps);
}

double
NodeInputPowerDbm(double donorEirpDbm, const RelaySegment& first, double frequencyHz)
{
    return donorEirpDbm - FsplDb(first.distanceM, frequencyHz) - first.penetrationDb;
}

namespace
{

bool
InFront(double angleRad)
{
    return angleRad >= 0.0 && angleRad < 0.5 * std::numbers::pi;
}

} // namespace

std::optional<RelayedLink>
ComposeRelayPath(double donorEirpDbm, const PlacedNode& node, const RelayGeometry& g, const RadioParams& radio)
{
    const double f = radio.carrierFrequencyHz;
    const double fspl1 = FsplDb(g.first.distanceM, f);
    const double fspl2 = FsplDb(g.second.distanceM, f);
    const double rxGain = radio.ueAntennaGainDbi;

    return std::visit(
        [&](const auto& spec) -> std::optional<RelayedLink> {
            using T = std::decay_t<decltype(spec)>;
            RelayedLink link;
            if constexpr (std::is_same_v<T, GnbSpec>)
            {
                throw std::domain_error("node " + node.id + " is a gNB and cannot relay");
            }
            else if constexpr (std::is_same_v<T, RepeaterSpec>)
            {
                const RepeaterGain eff = RepeaterEffectiveGainDb(spec);
                if (!eff.gainDb || AzimuthDifferenceDeg(g.departureAzimuthDeg, node.azimuthDeg) > 0.5 * spec.serviceFovDeg)
                {
                    return std::nullopt;
                }
                const double input = donorEirpDbm - fspl1 - g.first.penetrationDb;
                const double output = std::min(input + *eff.gainDb, spec.maxEirpDbm);
                link.terms = LinkBudgetTerms::Compose(donorEirpDbm,
                                                      fspl1 + fspl2,
                                                      output - input,
                                                      g.first.penetrationDb + g.second.penetrationDb,
                                                      rxGain);
                link.snrPenaltyDb = kRepeaterSnrPenaltyDb;
            }
            else if constexpr (std::is_same_v<T, RisSpec>)
            {
                if (!InFront(g.incidentRad) || !InFront(g.departureRad))
                {
                    return std::nullopt;
                }
                const double gain = RisBistaticGainDb(spec, f, g.incidentRad, g.departureRad, spec.bits);
                link.terms = LinkBudgetTerms::Compose(donorEirpDbm,
                                                      fspl1 + fspl2,
                                                      gain,
                                                      g.first.penetrationDb + g.second.penetrationDb,
                                                      rxGain);
            }
            else if constexpr (std::is_same_v<T, SkinSpec>)
            {
                if (!InFront(g.incidentRad) || !InFront(g.departureRad) ||
                    AzimuthDifferenceDeg(g.incidentAzimuthDeg, spec.incidentAzimuthDeg) > spec.toleranceDeg ||
                    AzimuthDifferenceDeg(g.departureAzimuthDeg, spec.departureAzimuthDeg) > spec.toleranceDeg)
                {
                    return std::nullopt;
                }
                const double gain = RisBistaticGainDb(spec.sideM, f, g.incidentRad, g.departureRad, kContinuousPhase);
                link.terms = LinkBudgetTerms::Compose(donorEirpDbm,
                                                      fspl1 + fspl2,
                                                      gain,
                                                      g.first.penetrationDb + g.second.penetrationDb,
                                                      rxGain);
            }
            else if constexpr (std::is_same_v<T, IabSpec>)
            {
                const double backhaulRx = donorEirpDbm - fspl1 - g.first.penetrationDb + spec.antennaGainDbi;
                link.backhaulRxPowerDbm = backhaulRx;
                link.backhaulCapacityBps =
                    g.backhaulCapacityBps ? *g.backhaulCapacityBps
                                          : ShannonCapacityBps(backhaulRx, radio.bandwidthHz, radio.noiseFigureDb);
                link.terms = LinkBudgetTerms::Compose(spec.eirpDbm, fspl2, 0.0, g.second.penetrationDb, rxGain);
            }
            return link;
        },
        node.spec);
}

double
RelayedCapacityBps(const RelayedLink& link, const PlacedNode& node, const RadioParams& radio)
{
    const double snr = SnrDb(link.terms.rxPowerDbm, radio.bandwidthHz, radio.noiseFigureDb) - link.snrPenaltyDb;
    const double access = CapacityFromSnrDb(snr, radio.bandwidthHz);
    if (!link.backhaulCapacityBps)
    {
        return access;
    }
    const auto* iab = std::get_if<IabSpec>(&node.spec);
    return IabEndToEndCapacity(*link.backhaulCapacityBps, access, iab ? iab->resourceSplit : std::nullopt);
}

} // namespace smartem

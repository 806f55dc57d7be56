#ifndef SMARTEM_NODES_H
#define SMARTEM_NODES_H

#include "smartem/em-core.h"
#include "smartem/node-spec.h"
#include "smartem/scenario.h"

#include <cstddef>
#include <optional>

namespace smartem
{

struct RisElementCount
{
    std::size_t perSide = 0;
    std::size_t total = 0;
};

/// floor(side / (lambda/2)) per side. Throws std::domain_error below one pitch.
RisElementCount CountRisElements(const RisSpec& spec, double frequencyHz);

/// Total control power of the surface, mW.
double RisControlPowerMw(const RisSpec& spec, double frequencyHz);

/**
 * Far-field gain of a phase-conjugating aperture of area A between two
 * directions: 10*log10((4*pi*A/lambda^2)^2 cos(in) cos(out)) minus the
 * expected quantization loss, clamped below at 0 dB. Angles are measured from
 * the surface normal; bits = kContinuousPhase means unquantized.
 *
 * Throws std::domain_error for angles outside [0, pi/2).
 */
double RisBistaticGainDb(double sideM, double frequencyHz, double incidentRad, double departureRad, unsigned bits);
double RisBistaticGainDb(const RisSpec& spec, double frequencyHz, double incidentRad, double departureRad, unsigned bits);

enum class RepeaterStatus
{
    Nominal,
    Reduced,
    Off,
};

struct RepeaterGain
{
    /// Empty when the repeater is switched off.
    std::optional<double> gainDb;
    RepeaterStatus status = RepeaterStatus::Off;
};

/// Stability check: the operating gain never exceeds isolation - margin.
RepeaterGain RepeaterEffectiveGainDb(const RepeaterSpec& spec);

/// SNR penalty applied to repeater paths for amplified noise.
inline constexpr double kRepeaterSnrPenaltyDb = 3.0;

/**
 * Half-duplex end-to-end capacity: min(a*Cb, (1-a)*Ca) for a fixed backhaul
 * share a, or Ca*Cb/(Ca+Cb) for the optimal split.
 */
double IabEndToEndCapacity(double backhaulBps, double accessBps, std::optional<double> backhaulShare);

/// The backhaul share achieving the optimal split, Ca/(Ca+Cb).
double IabOptimalShare(double backhaulBps, double accessBps);

/// Geometry of one gNB -> node -> UE path as seen by the node.
struct RelaySegment
{
    double distanceM = 0.0;
    double penetrationDb = 0.0;
    bool los = false;
};

struct RelayGeometry
{
    RelaySegment first;
    RelaySegment second;
    /// Angles from the node's normal, radians; only meaningful for surfaces.
    double incidentRad = 0.0;
    double departureRad = 0.0;
    /// Horizontal bearings from the node towards the source and towards the UE.
    double incidentAzimuthDeg = 0.0;
    double departureAzimuthDeg = 0.0;
    /// Overrides the backhaul capacity of an IAB node (multi-hop backhaul).
    std::optional<double> backhaulCapacityBps;
};

struct RelayedLink
{
    LinkBudgetTerms terms;
    double snrPenaltyDb = 0.0;
    /// Set for regenerative relays; capacity is the end-to-end half-duplex value.
    std::optional<double> backhaulCapacityBps;
    std::optional<double> backhaulRxPowerDbm;
};

/// Power at the node input from a donor: EIRP minus first-segment losses.
double NodeInputPowerDbm(double donorEirpDbm, const RelaySegment& first, double frequencyHz);

/**
 * Composes the received power of a relayed path through `node`, fed by a
 * transmitter with EIRP `donorEirpDbm`. Returns empty when the node cannot
 * serve the UE (repeater off or UE outside its service sector, surface
 * geometry behind the aperture, skin off its configured directions).
 *
 * Throws std::domain_error for nodes that cannot relay (gNBs).
 */
std::optional<RelayedLink> ComposeRelayPath(double donorEirpDbm,
                                            const PlacedNode& node,
                                            const RelayGeometry& geometry,
                                            const RadioParams& radio);

/// Capacity of a composed link, applying the repeater penalty and IAB half-duplex split.
double RelayedCapacityBps(const RelayedLink& link, const PlacedNode& node, const RadioParams& radio);

} // namespace smartem

#endif // SMARTEM_NODES_H

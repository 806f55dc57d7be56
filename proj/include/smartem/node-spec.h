#ifndef SMARTEM_NODE_SPEC_H
#define SMARTEM_NODE_SPEC_H

#include "smartem/geometry.h"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace smartem
{

/// Node classes in decreasing order of cost and complexity.
enum class NodeClass
{
    Gnb,
    Iab,
    Repeater,
    Ris,
    Skin,
};

inline constexpr std::array<NodeClass, 5> kAllNodeClasses = {
    NodeClass::Gnb, NodeClass::Iab, NodeClass::Repeater, NodeClass::Ris, NodeClass::Skin};

std::string_view ToString(NodeClass cls);
std::optional<NodeClass> NodeClassFromString(std::string_view name);

/// Donor base station with wired backhaul.
struct GnbSpec
{
    double eirpDbm = 65.0;
    double antennaGainDbi = 33.0;
    double heightM = 10.0;
    double powerW = 800.0;
};

/// Layer-2 regenerative relay with half-duplex in-band backhaul.
struct IabSpec
{
    double eirpDbm = 60.0;
    /// Access antenna gain, reused by the virtual mobile termination on the backhaul.
    double antennaGainDbi = 28.0;
    double heightM = 6.0;
    double powerW = 350.0;
    /// Fraction of resources given to the backhaul; empty selects the optimal split.
    std::optional<double> resourceSplit;
};

/// Non-regenerative amplify-and-forward node with a donor and a service antenna.
struct RepeaterSpec
{
    double e2eGainDb = 90.0;
    double maxEirpDbm = 59.0;
    double isolationDb = 0.0;
    double stabilityMarginDb = 10.0;
    double powerW = 20.0;
    double heightM = 6.0;
    /// Field of view of the service antenna, centred on the node azimuth.
    double serviceFovDeg = 120.0;
};

/// Reconfigurable surface; the node azimuth is its normal.
struct RisSpec
{
    double sideM = 0.25;
    unsigned bits = 2;
    double elementPowerMw = 0.2;
    double heightM = 6.0;
};

/// Passive fixed surface redirecting one incident azimuth towards one departure azimuth.
struct SkinSpec
{
    double sideM = 0.5;
    double incidentAzimuthDeg = 0.0;
    double departureAzimuthDeg = 0.0;
    double toleranceDeg = 5.0;
    double heightM = 6.0;
};

using NodeSpec = std::variant<GnbSpec, IabSpec, RepeaterSpec, RisSpec, SkinSpec>;

NodeClass ClassOf(const NodeSpec& spec);
double PowerConsumptionW(const NodeSpec& spec, double frequencyHz);

struct PlacedNode
{
    std::string id;
    NodeSpec spec;
    Point3 position;
    double azimuthDeg = 0.0;
};

} // namespace smartem

#endif // SMARTEM_NODE_SPEC_H

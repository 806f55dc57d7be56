#include "smartem/arrays.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace smartem
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;

double
WrapPhase(double phase)
{
    double w = std::fmod(phase, kTwoPi);
    if (w < 0.0)
    {
        w += kTwoPi;
    }
    // fmod of a tiny negative value can round up to exactly 2*pi.
    return w >= kTwoPi ? 0.0 : w;
}

double
LevelPhase(std::uint64_t level, std::uint64_t levels)
{
    return kTwoPi * static_cast<double>(level) / static_cast<double>(levels);
}

void
CheckAngle(double angleRad)
{
    if (!(std::abs(angleRad) <= kHalfPi + 1e-12))
    {
        throw std::domain_error("angle outside [-pi/2, pi/2]: " + std::to_string(angleRad));
    }
}

void
CheckBits(unsigned bits)
{
    if (bits < 1 || bits > 16)
    {
        throw std::invalid_argument("phase quantization needs 1..16 bits, got " + std::to_string(bits));
    }
}

double
AzimuthIntegral(double q)
{
    if (q == 0.0)
    {
        return kTwoPi;
    }
    return std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (q + 1.0)) / std::tgamma(0.5 * q + 1.0);
}

/// Shared pattern math: Gram moments of the elevation integral and steering phasors.
class PatternModel
{
  public:
    explicit PatternModel(const ArraySpec& spec)
        : m_spec(spec),
          m_gram(spec.elements, 0.0)
    {
        CheckArraySpec(spec);
        const auto intervals =
            std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(180.0 / spec.integrationStepDeg)));
        const double h = std::numbers::pi / static_cast<double>(intervals);
        const double azimuth = AzimuthIntegral(spec.elementExponent);
        for (std::size_t i = 0; i <= intervals; ++i)
        {
            const double theta = -kHalfPi + h * static_cast<double>(i);
            const double weight = (i == 0 || i == intervals) ? 0.5 : 1.0;
            const double elevation = ElementPattern(spec, theta) * std::cos(theta);
            if (elevation <= 0.0)
            {
                continue;
            }
            const double u = std::sin(theta);
            for (std::size_t delta = 0; delta < spec.elements; ++delta)
            {
                m_gram[delta] += weight * h * elevation *
                                 std::cos(kTwoPi * spec.spacingWavelengths * static_cast<double>(delta) * u);
            }
        }
        const double toUnitSphere = azimuth / (4.0 * std::numbers::pi);
        for (double& g : m_gram)
        {
            g *= toUnitSphere;
        }
    }

    std::size_t Elements() const
    {
        return m_spec.elements;
    }

    double Gram(std::size_t delta) const
    {
        return m_gram[delta];
    }

    std::complex<double> Steering(std::size_t n, double angleRad) const
    {
        return std::polar(1.0, kTwoPi * m_spec.spacingWavelengths * static_cast<double>(n) * std::sin(angleRad));
    }

    double Power(std::span<const double> phases) const
    {
        const std::size_t n = phases.size();
        double total = static_cast<double>(n) * m_gram[0];
        for (std::size_t m = 0; m < n; ++m)
        {
            for (std::size_t l = m + 1; l < n; ++l)
            {
                total += 2.0 * m_gram[l - m] * std::cos(phases[m] - phases[l]);
            }
        }
        return total;
    }

    double Numerator(std::span<const double> phases, double angleRad) const
    {
        std::complex<double> af = 0.0;
        for (std::size_t n = 0; n < phases.size(); ++n)
        {
            af += Steering(n, angleRad) * std::polar(1.0, phases[n]);
        }
        return std::norm(af) * ElementPattern(m_spec, angleRad);
    }

    double Directivity(std::span<const double> phases, double angleRad) const
    {
        return Numerator(phases, angleRad) / Power(phases);
    }

  private:
    ArraySpec m_spec;
    std::vector<double> m_gram;
};

/// Maximizes (alpha + p cos + q sin) / (gamma + r cos + s sin) over the phase.
double
BestContinuousPhase(double alpha, double p, double q, double gamma, double r, double s, double current)
{
    auto ratio = [&](double phi) {
        return (alpha + p * std::cos(phi) + q * std::sin(phi)) / (gamma + r * std::cos(phi) + s * std::sin(phi));
    };
    const double a = alpha * r - p * gamma;
    const double b = q * gamma - alpha * s;
    const double c = q * r - p * s;
    double best = current;
    double bestValue = ratio(current);
    const double radius = std::hypot(a, b);
    if (radius > 0.0)
    {
        // a sin + b cos = radius * sin(phi + psi) = -c
        const double psi = std::atan2(b, a);
        const double x = std::clamp(-c / radius, -1.0, 1.0);
        const double base = std::asin(x);
        for (double candidate : {base - psi, std::numbers::pi - base - psi})
        {
            const double phi = WrapPhase(candidate);
            const double value = ratio(phi);
            if (value > bestValue)
            {
                bestValue = value;
                best = phi;
            }
        }
    }
    return best;
}

/// Coordinate ascent from `codeword` at one angle; quantized elements try every level.
PhaseCodeword
CoordinateAscent(const PatternModel& model, PhaseCodeword codeword, double angleRad)
{
    const std::size_t n = model.Elements();
    std::vector<std::complex<double>> steering(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        steering[i] = model.Steering(i, angleRad);
    }
    std::vector<double>& phases = codeword.phases;
    double current = model.Directivity(phases, angleRad);
    constexpr std::size_t kMaxPasses = 1000;
    for (std::size_t pass = 0; pass < kMaxPasses; ++pass)
    {
        bool improved = false;
        for (std::size_t e = 0; e < n; ++e)
        {
            const double before = phases[e];
            double chosen = before;
            if (codeword.bits[e] == kContinuousPhase)
            {
                std::complex<double> others = 0.0;
                double r = 0.0;
                double s = 0.0;
                for (std::size_t m = 0; m < n; ++m)
                {
                    if (m == e)
                    {
                        continue;
                    }
                    others += steering[m] * std::polar(1.0, phases[m]);
                    const double g = model.Gram(m > e ? m - e : e - m);
                    r += 2.0 * g * std::cos(phases[m]);
                    s += 2.0 * g * std::sin(phases[m]);
                }
                const std::complex<double> z = std::conj(others) * steering[e];
                phases[e] = 0.0;
                const double othersPower = model.Power(phases) - model.Gram(0) - r;
                phases[e] = before;
                chosen = BestContinuousPhase(std::norm(others) + 1.0,
                                             2.0 * z.real(),
                                             -2.0 * z.imag(),
                                             othersPower + model.Gram(0),
                                             r,
                                             s,
                                             before);
                phases[e] = chosen;
            }
            else
            {
                const std::uint64_t levels = std::uint64_t{1} << codeword.bits[e];
                double bestValue = current;
                for (std::uint64_t k = 0; k < levels; ++k)
                {
                    phases[e] = LevelPhase(k, levels);
                    const double value = model.Directivity(phases, angleRad);
                    if (value > bestValue)
                    {
                        bestValue = value;
                        chosen = phases[e];
                    }
                }
                phases[e] = chosen;
            }
            const double after = model.Directivity(phases, angleRad);
            if (after > current * (1.0 + 1e-13))
            {
                improved = true;
                current = after;
            }
            else
            {
                phases[e] = before;
            }
        }
        if (!improved)
        {
            break;
        }
    }
    return codeword;
}

/// Exhaustive search over a quantized space for all angles at once.
std::vector<EnvelopePoint>
ExhaustiveEnvelope(const PatternModel& model,
                   std::span<const unsigned> bits,
                   std::span<const double> angles)
{
    const std::size_t n = bits.size();
    const unsigned maxBits = *std::max_element(bits.begin(), bits.end());
    const std::size_t reference =
        static_cast<std::size_t>(std::min_element(bits.begin(), bits.end()) - bits.begin());
    const std::uint64_t units = std::uint64_t{1} << maxBits;

    std::vector<double> cosTable(units);
    std::vector<std::complex<double>> phasor(units);
    for (std::uint64_t k = 0; k < units; ++k)
    {
        cosTable[k] = std::cos(LevelPhase(k, units));
        phasor[k] = std::polar(1.0, LevelPhase(k, units));
    }
    std::vector<std::complex<double>> steering(angles.size() * n);
    std::vector<double> elementGain(angles.size());
    for (std::size_t a = 0; a < angles.size(); ++a)
    {
        for (std::size_t e = 0; e < n; ++e)
        {
            steering[a * n + e] = model.Steering(e, angles[a]);
        }
        elementGain[a] = model.Numerator(std::vector<double>{0.0}, angles[a]);
    }

    std::vector<std::uint64_t> levels(n, 0);
    std::vector<std::uint64_t> step(n);
    for (std::size_t e = 0; e < n; ++e)
    {
        step[e] = units >> bits[e];
    }
    std::vector<double> best(angles.size(), -1.0);
    std::vector<std::vector<std::uint64_t>> bestLevels(angles.size(), levels);

    while (true)
    {
        double power = static_cast<double>(n) * model.Gram(0);
        for (std::size_t m = 0; m < n; ++m)
        {
            for (std::size_t l = m + 1; l < n; ++l)
            {
                const std::uint64_t diff = (levels[m] * step[m] + units - (levels[l] * step[l]) % units) % units;
                power += 2.0 * model.Gram(l - m) * cosTable[diff];
            }
        }
        for (std::size_t a = 0; a < angles.size(); ++a)
        {
            std::complex<double> af = 0.0;
            for (std::size_t e = 0; e < n; ++e)
            {
                af += steering[a * n + e] * phasor[(levels[e] * step[e]) % units];
            }
            const double d = std::norm(af) * elementGain[a] / power;
            if (d > best[a])
            {
                best[a] = d;
                bestLevels[a] = levels;
            }
        }
        // Mixed-radix increment, skipping the reference element held at level 0.
        std::size_t e = 0;
        for (; e < n; ++e)
        {
            if (e == reference)
            {
                continue;
            }
            if (++levels[e] < (std::uint64_t{1} << bits[e]))
            {
                break;
            }
            levels[e] = 0;
        }
        if (e == n)
        {
            break;
        }
    }

    std::vector<EnvelopePoint> out(angles.size());
    for (std::size_t a = 0; a < angles.size(); ++a)
    {
        EnvelopePoint& pt = out[a];
        pt.angleRad = angles[a];
        pt.exhaustive = true;
        pt.codeword.bits.assign(bits.begin(), bits.end());
        pt.codeword.phases.resize(n);
        for (std::size_t e = 0; e < n; ++e)
        {
            pt.codeword.phases[e] = LevelPhase(bestLevels[a][e], std::uint64_t{1} << bits[e]);
        }
        pt.directivityDbi = 10.0 * std::log10(model.Directivity(pt.codeword.phases, angles[a]));
    }
    return out;
}

} // namespace

std::optional<unsigned>
PhaseCodeword::UniformBits() const
{
    if (bits.empty() || std::adjacent_find(bits.begin(), bits.end(), std::not_equal_to<>()) != bits.end())
    {
        return std::nullopt;
    }
    return bits.front();
}

void
CheckArraySpec(const ArraySpec& spec)
{
    if (spec.elements < 1)
    {
        throw std::invalid_argument("array needs at least one element");
    }
    if (!(spec.spacingWavelengths > 0.0))
    {
        throw std::invalid_argument("element spacing must be positive");
    }
    if (!(spec.elementExponent >= 0.0))
    {
        throw std::invalid_argument("element exponent must be non-negative");
    }
    if (!(spec.integrationStepDeg > 0.0 && spec.integrationStepDeg <= 90.0))
    {
        throw std::invalid_argument("integration step must be in (0, 90] degrees");
    }
}

double
ElementPattern(const ArraySpec& spec, double angleRad)
{
    if (spec.elementExponent == 0.0)
    {
        return 1.0;
    }
    const double c = std::cos(angleRad);
    return c > 0.0 ? std::pow(c, spec.elementExponent) : 0.0;
}

double
NormalizedRadiatedPower(const ArraySpec& spec, std::span<const double> phases)
{
    if (phases.size() != spec.elements)
    {
        throw std::invalid_argument("codeword size does not match the array");
    }
    return PatternModel(spec).Power(phases);
}

double
ArrayFactorDirectivityDbi(const ArraySpec& spec, const PhaseCodeword& codeword, double angleRad)
{
    CheckAngle(angleRad);
    if (codeword.phases.size() != spec.elements)
    {
        throw std::invalid_argument("codeword size does not match the array");
    }
    return 10.0 * std::log10(PatternModel(spec).Directivity(codeword.phases, angleRad));
}

PhaseCodeword
SteerContinuous(const ArraySpec& spec, double targetAngleRad)
{
    CheckArraySpec(spec);
    CheckAngle(targetAngleRad);
    PhaseCodeword cw;
    cw.phases.resize(spec.elements);
    cw.bits.assign(spec.elements, kContinuousPhase);
    const double progression = kTwoPi * spec.spacingWavelengths * std::sin(targetAngleRad);
    for (std::size_t n = 0; n < spec.elements; ++n)
    {
        cw.phases[n] = WrapPhase(-progression * static_cast<double>(n));
    }
    return cw;
}

double
QuantizePhase(double phase, unsigned bits)
{
    CheckBits(bits);
    const std::uint64_t levels = std::uint64_t{1} << bits;
    const double x = WrapPhase(phase) / kTwoPi * static_cast<double>(levels);
    const double lower = std::floor(x);
    const double frac = x - lower;
    const auto lo = static_cast<std::uint64_t>(lower) % levels;
    const std::uint64_t hi = (lo + 1) % levels;
    constexpr double kTie = 1e-12;
    std::uint64_t k;
    if (std::abs(frac - 0.5) <= kTie)
    {
        k = std::min(lo, hi);
    }
    else
    {
        k = frac < 0.5 ? lo : hi;
    }
    return LevelPhase(k, levels);
}

PhaseCodeword
Quantize(const PhaseCodeword& codeword, std::span<const unsigned> bitsPerElement)
{
    if (bitsPerElement.size() != codeword.phases.size())
    {
        throw std::invalid_argument("bit assignment size does not match the codeword");
    }
    PhaseCodeword out;
    out.phases.resize(codeword.phases.size());
    out.bits.assign(bitsPerElement.begin(), bitsPerElement.end());
    for (std::size_t n = 0; n < codeword.phases.size(); ++n)
    {
        out.phases[n] = bitsPerElement[n] == kContinuousPhase ? WrapPhase(codeword.phases[n])
                                                              : QuantizePhase(codeword.phases[n], bitsPerElement[n]);
    }
    return out;
}

PhaseCodeword
Quantize(const PhaseCodeword& codeword, unsigned bits)
{
    CheckBits(bits);
    const std::vector<unsigned> assignment(codeword.phases.size(), bits);
    return Quantize(codeword, assignment);
}

double
QuantizationLossDb(const ArraySpec& spec, double targetAngleRad, unsigned bits)
{
    return QuantizationLossDb(spec, targetAngleRad, bits, {});
}

double
QuantizationLossDb(const ArraySpec& spec,
                   double targetAngleRad,
                   unsigned bits,
                   std::span<const double> elementPhaseOffsets)
{
    if (!elementPhaseOffsets.empty() && elementPhaseOffsets.size() != spec.elements)
    {
        throw std::invalid_argument("phase offsets size does not match the array");
    }
    const PatternModel model(spec);
    PhaseCodeword continuous = SteerContinuous(spec, targetAngleRad);
    for (std::size_t n = 0; n < elementPhaseOffsets.size(); ++n)
    {
        continuous.phases[n] = WrapPhase(continuous.phases[n] - elementPhaseOffsets[n]);
    }
    PhaseCodeword quantized = Quantize(continuous, bits);
    for (std::size_t n = 0; n < elementPhaseOffsets.size(); ++n)
    {
        continuous.phases[n] += elementPhaseOffsets[n];
        quantized.phases[n] += elementPhaseOffsets[n];
    }
    return 10.0 * std::log10(model.Directivity(continuous.phases, targetAngleRad) /
                             model.Directivity(quantized.phases, targetAngleRad));
}

double
ExpectedQuantizationLossDb(unsigned bits)
{
    if (bits == kContinuousPhase)
    {
        return 0.0;
    }
    CheckBits(bits);
    const double x = std::numbers::pi / static_cast<double>(std::uint64_t{1} << bits);
    return -20.0 * std::log10(std::sin(x) / x);
}

std::vector<unsigned>
HybridBits(std::size_t elements)
{
    std::vector<unsigned> bits(elements);
    for (std::size_t n = 0; n < elements; ++n)
    {
        bits[n] = n % 2 == 0 ? 1 : 2;
    }
    return bits;
}

std::vector<EnvelopePoint>
ScanLossEnvelope(const ArraySpec& spec,
                 std::span<const unsigned> bitsPerElement,
                 std::span<const double> anglesRad,
                 const EnvelopeOptions& options)
{
    if (anglesRad.empty())
    {
        throw std::invalid_argument("envelope needs a non-empty angle grid");
    }
    if (bitsPerElement.size() != spec.elements)
    {
        throw std::invalid_argument("bit assignment size does not match the array");
    }
    for (double a : anglesRad)
    {
        CheckAngle(a);
    }
    const PatternModel model(spec);
    const bool quantizedOnly = std::none_of(bitsPerElement.begin(), bitsPerElement.end(), [](unsigned b) {
        return b == kContinuousPhase;
    });
    unsigned totalBits = 0;
    for (unsigned b : bitsPerElement)
    {
        if (b != kContinuousPhase)
        {
            CheckBits(b);
        }
        totalBits += b;
    }
    if (quantizedOnly && totalBits <= options.exhaustiveLimitBits)
    {
        return ExhaustiveEnvelope(model, bitsPerElement, anglesRad);
    }

    std::vector<EnvelopePoint> out(anglesRad.size());
    for (std::size_t a = 0; a < anglesRad.size(); ++a)
    {
        const PhaseCodeword start = Quantize(SteerContinuous(spec, anglesRad[a]), bitsPerElement);
        EnvelopePoint& pt = out[a];
        pt.angleRad = anglesRad[a];
        pt.codeword = CoordinateAscent(model, start, anglesRad[a]);
        pt.directivityDbi = 10.0 * std::log10(model.Directivity(pt.codeword.phases, anglesRad[a]));
    }
    return out;
}

Codebook
BuildRisCodebook(const ArraySpec& spec, double incidentRad, std::span<const double> departuresRad, unsigned bits)
{
    CheckArraySpec(spec);
    if (!(std::abs(incidentRad) < kHalfPi))
    {
        throw std::domain_error("incident direction is not in front of the surface");
    }
    Codebook book;
    book.bits = bits;
    for (double departure : departuresRad)
    {
        if (!(std::abs(departure) < kHalfPi))
        {
            throw std::domain_error("departure direction is not in front of the surface");
        }
        CodebookEntry entry;
        entry.incidentRad = incidentRad;
        entry.departureRad = departure;
        entry.codeword.phases.resize(spec.elements);
        entry.codeword.bits.assign(spec.elements, kContinuousPhase);
        const double progression = kTwoPi * spec.spacingWavelengths * (std::sin(incidentRad) + std::sin(departure));
        for (std::size_t n = 0; n < spec.elements; ++n)
        {
            entry.codeword.phases[n] = WrapPhase(-progression * static_cast<double>(n));
        }
        if (bits != kContinuousPhase)
        {
            entry.codeword = Quantize(entry.codeword, bits);
        }
        book.entries.push_back(std::move(entry));
    }
    if (book.entries.empty())
    {
        throw std::invalid_argument("codebook needs at least one departure direction");
    }
    return book;
}

double
BistaticArrayFactorDb(const ArraySpec& spec, const PhaseCodeword& codeword, double incidentRad, double departureRad)
{
    if (codeword.phases.size() != spec.elements)
    {
        throw std::invalid_argument("codeword size does not match the array");
    }
    const double progression = kTwoPi * spec.spacingWavelengths * (std::sin(incidentRad) + std::sin(departureRad));
    std::complex<double> af = 0.0;
    for (std::size_t n = 0; n < spec.elements; ++n)
    {
        af += std::polar(1.0, codeword.phases[n] + progression * static_cast<double>(n));
    }
    const double n = static_cast<double>(spec.elements);
    return 10.0 * std::log10(std::norm(af) / (n * n));
}

double
MinDirectivityOverSectorDbi(const ArraySpec& spec, const PhaseCodeword& codeword, double centerRad, double widthRad)
{
    const PatternModel model(spec);
    const double lo = std::max(-kHalfPi, centerRad - 0.5 * widthRad);
    const double hi = std::min(kHalfPi, centerRad + 0.5 * widthRad);
    const double step = std::numbers::pi / 180.0;
    const auto samples = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    const double power = model.Power(codeword.phases);
    double worst = INFINITY;
    for (std::size_t i = 0; i < samples; ++i)
    {
        const double angle = std::min(hi, lo + step * static_cast<double>(i));
        worst = std::min(worst, model.Numerator(codeword.phases, angle) / power);
    }
    return 10.0 * std::log10(worst);
}

PhaseCodeword
SynthesizeWideBeam(const ArraySpec& spec, double centerRad, double widthRad, unsigned bits)
{
    CheckAngle(centerRad);
    if (!(widthRad > 0.0))
    {
        throw std::invalid_argument("beam width must be positive");
    }
    const PhaseCodeword steer = SteerContinuous(spec, centerRad);
    const double middle = 0.5 * static_cast<double>(spec.elements - 1);
    auto shaped = [&](double curvature) {
        PhaseCodeword cw = steer;
        for (std::size_t n = 0; n < spec.elements; ++n)
        {
            const double offset = static_cast<double>(n) - middle;
            cw.phases[n] = WrapPhase(cw.phases[n] + curvature * offset * offset);
        }
        return bits == kContinuousPhase ? cw : Quantize(cw, bits);
    };
    PhaseCodeword best = shaped(0.0);
    double bestWorst = MinDirectivityOverSectorDbi(spec, best, centerRad, widthRad);
    constexpr int kSteps = 400;
    for (int i = 1; i <= kSteps; ++i)
    {
        const double curvature = std::numbers::pi * static_cast<double>(i) / kSteps;
        PhaseCodeword cw = shaped(curvature);
        const double worst = MinDirectivityOverSectorDbi(spec, cw, centerRad, widthRad);
        if (worst > bestWorst)
        {
            bestWorst = worst;
            best = std::move(cw);
        }
    }
    return best;
}

} // namespace smartem

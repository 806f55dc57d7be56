#ifndef SMARTEM_ARRAYS_H
#define SMARTEM_ARRAYS_H

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace smartem
{

/// Per-element bit depth meaning "continuous phase".
inline constexpr unsigned kContinuousPhase = 0;

/**
 * Uniform linear array along the vertical axis. Element n sits at
 * n * spacingWavelengths wavelengths; angles are elevations from broadside.
 *
 * The element power pattern is cos^q of the angle from boresight over the
 * front half-space and zero behind; q = 0 selects an isotropic element.
 */
struct ArraySpec
{
    std::size_t elements = 8;
    double spacingWavelengths = 0.5;
    double elementExponent = 2.0;
    /// Trapezoidal step of the elevation integral used for power normalization.
    double integrationStepDeg = 1.0;
};

struct PhaseCodeword
{
    /// Radians in [0, 2*pi), one per element. Amplitudes are fixed at 1.
    std::vector<double> phases;
    /// Bit depth per element; kContinuousPhase for unquantized elements.
    std::vector<unsigned> bits;

    std::optional<unsigned> UniformBits() const;
};

/// Throws std::invalid_argument when the spec breaks its invariants.
void CheckArraySpec(const ArraySpec& spec);

/// Element power pattern (linear) in the elevation cut.
double ElementPattern(const ArraySpec& spec, double angleRad);

/**
 * Directivity at `angleRad` of the element-weighted array factor, normalized
 * by the total radiated power integrated over the sphere.
 */
double ArrayFactorDirectivityDbi(const ArraySpec& spec, const PhaseCodeword& codeword, double angleRad);

/// Total radiated power of the codeword divided by 4*pi (1 for a single isotropic element).
double NormalizedRadiatedPower(const ArraySpec& spec, std::span<const double> phases);

/// phi_n = -k * d_n * sin(target) mod 2*pi.
PhaseCodeword SteerContinuous(const ArraySpec& spec, double targetAngleRad);

/// Nearest level 2*pi*k / 2^bits on the circle; exact ties go to the smaller k.
double QuantizePhase(double phase, unsigned bits);

PhaseCodeword Quantize(const PhaseCodeword& codeword, unsigned bits);
PhaseCodeword Quantize(const PhaseCodeword& codeword, std::span<const unsigned> bitsPerElement);

/// Directivity of the continuous steering codeword minus that of its quantized version, dB.
double QuantizationLossDb(const ArraySpec& spec, double targetAngleRad, unsigned bits);

/**
 * Same, when element n additionally sees a field phase elementPhaseOffsets[n]
 * that the codeword must conjugate before quantization.
 */
double QuantizationLossDb(const ArraySpec& spec,
                          double targetAngleRad,
                          unsigned bits,
                          std::span<const double> elementPhaseOffsets);

/// Large-array expectation of the quantization loss, -20*log10(sinc(pi / 2^bits)).
double ExpectedQuantizationLossDb(unsigned bits);

/// Alternating 1- and 2-bit assignment, starting with 1 bit on element 0.
std::vector<unsigned> HybridBits(std::size_t elements);

struct EnvelopePoint
{
    double angleRad = 0.0;
    double directivityDbi = 0.0;
    PhaseCodeword codeword;
    bool exhaustive = false;
};

struct EnvelopeOptions
{
    /// Codeword spaces up to 2^limit are searched exhaustively.
    unsigned exhaustiveLimitBits = 20;
};

/**
 * Best directivity reachable at each angle with the given per-element bit
 * depths. Quantized spaces up to 2^exhaustiveLimitBits codewords are searched
 * exhaustively (the global phase is fixed on the coarsest element); larger or
 * continuous spaces start from the steering codeword and run coordinate
 * ascent in ascending element order until no element improves.
 */
std::vector<EnvelopePoint> ScanLossEnvelope(const ArraySpec& spec,
                                            std::span<const unsigned> bitsPerElement,
                                            std::span<const double> anglesRad,
                                            const EnvelopeOptions& options = {});

/// A codebook entry steers from an incident to a departure direction (radians from the normal).
struct CodebookEntry
{
    double incidentRad = 0.0;
    double departureRad = 0.0;
    PhaseCodeword codeword;
};

struct Codebook
{
    unsigned bits = kContinuousPhase;
    std::vector<CodebookEntry> entries;
};

/**
 * Site-specific RIS codebook; one entry per departure direction. Phases
 * conjugate the incident plus departure path phase at each element and are
 * then quantized. Throws std::domain_error for directions outside the front
 * half-space.
 */
Codebook BuildRisCodebook(const ArraySpec& spec,
                          double incidentRad,
                          std::span<const double> departuresRad,
                          unsigned bits);

/// |sum_n exp(j(phi_n + k x_n (sin(in) + sin(out))))|^2 / N^2, in dB.
double BistaticArrayFactorDb(const ArraySpec& spec,
                             const PhaseCodeword& codeword,
                             double incidentRad,
                             double departureRad);

/**
 * Wide beam for initial access: steering plus a quadratic phase spread chosen
 * to maximize the worst directivity over [center - width/2, center + width/2].
 */
PhaseCodeword SynthesizeWideBeam(const ArraySpec& spec, double centerRad, double widthRad, unsigned bits);

/// Smallest directivity over a sector sampled at 1 degree.
double MinDirectivityOverSectorDbi(const ArraySpec& spec,
                                   const PhaseCodeword& codeword,
                                   double centerRad,
                                   double widthRad);

} // namespace smartem

#endif // SMARTEM_ARRAYS_H

#include "oracles.h"

#include "smartem/arrays.h"
#include "smartem/codebook-io.h"
#include "smartem/src-outage.h"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace smartem;

namespace
{

constexpr double kPi = std::numbers::pi;

double
Deg(double d)
{
    return d * kPi / 180.0;
}

ArraySpec
Spec(std::size_t n, double d, double q)
{
    ArraySpec s;
    s.elements = n;
    s.spacingWavelengths = d;
    s.elementExponent = q;
    return s;
}

PhaseCodeword
Uniform(std::size_t n, double phase = 0.0)
{
    PhaseCodeword w;
    w.phases.assign(n, phase);
    w.bits.assign(n, kContinuousPhase);
    return w;
}

double
CircularDistance(double a, double b)
{
    const double d = std::fmod(std::abs(a - b), 2.0 * kPi);
    return std::min(d, 2.0 * kPi - d);
}

std::vector<double>
AngleGrid(double lo, double hi, double stepDeg)
{
    std::vector<double> out;
    for (double d = lo; d <= hi + 1e-9; d += stepDeg)
    {
        out.push_back(Deg(d));
    }
    return out;
}

} // namespace

TEST_CASE("uniform broadside array of isotropic elements")
{
    const ArraySpec s = Spec(8, 0.5, 0.0);
    CHECK(ArrayFactorDirectivityDbi(s, Uniform(8), 0.0) == doctest::Approx(10.0 * std::log10(8.0)).epsilon(1e-6));
}

TEST_CASE("single element directivity is the element pattern alone")
{
    for (double q : {0.0, 1.0, 2.0, 4.0})
    {
        const ArraySpec s = Spec(1, 0.5, q);
        for (double a : {0.0, 0.3, -0.9, 1.4})
        {
            const double lib = ArrayFactorDirectivityDbi(s, Uniform(1, 1.234), a);
            CHECK(lib == doctest::Approx(oracle::SphereDirectivityDbi(1, 0.5, q, {1.234}, a)).epsilon(2e-3));
        }
    }
    // cos^2 element: peak directivity 10*log10(2*(q+1)) for a half-space pattern.
    CHECK(ArrayFactorDirectivityDbi(Spec(1, 0.5, 2.0), Uniform(1), 0.0) ==
          doctest::Approx(10.0 * std::log10(6.0)).epsilon(1e-3));
}

TEST_CASE("directivity matches full-sphere quadrature for arbitrary codewords")
{
    CounterRng rng(5, 0);
    for (int trial = 0; trial < 6; ++trial)
    {
        const std::size_t n = 2 + trial;
        const double d = 0.3 + 0.25 * trial;
        const double q = trial % 3;
        PhaseCodeword w = Uniform(n);
        for (double& p : w.phases)
        {
            p = rng.Uniform(0.0, 2.0 * kPi);
        }
        const double angle = rng.Uniform(-1.2, 1.2);
        const double lib = ArrayFactorDirectivityDbi(Spec(n, d, q), w, angle);
        const double ref = oracle::SphereDirectivityDbi(n, d, q, w.phases, angle, 900);
        CHECK(lib == doctest::Approx(ref).epsilon(0.02 / std::max(1.0, std::abs(ref))));
    }
}

TEST_CASE("pattern integrates to 4 pi")
{
    for (double q : {0.0, 2.0})
    {
        const ArraySpec s = Spec(8, 1.5, q);
        const PhaseCodeword w = SteerContinuous(s, Deg(20));
        // D(elev, az) separates as D(elev, 0) * cos^q(az) for this element model.
        const double azimuth = q == 0.0 ? 2.0 * kPi : kPi / 2.0;
        const int steps = 4000;
        double total = 0.0;
        for (int i = 0; i < steps; ++i)
        {
            const double e = -kPi / 2.0 + (i + 0.5) * kPi / steps;
            total += std::pow(10.0, ArrayFactorDirectivityDbi(s, w, e) / 10.0) * std::cos(e) * kPi / steps;
        }
        CHECK(total * azimuth == doctest::Approx(4.0 * kPi).epsilon(0.01));
    }
}

TEST_CASE("angles beyond the visible range are rejected")
{
    CHECK_THROWS_AS(ArrayFactorDirectivityDbi(Spec(4, 0.5, 2), Uniform(4), 1.6), std::domain_error);
}

TEST_CASE("steering codewords")
{
    const ArraySpec s = Spec(8, 1.5, 2.0);
    for (double p : SteerContinuous(s, 0.0).phases)
    {
        CHECK(p == 0.0);
    }
    const PhaseCodeword w = SteerContinuous(s, Deg(30));
    CHECK(CircularDistance(w.phases[1], kPi / 2.0) < 1e-12);
    CHECK(CircularDistance(w.phases[2], kPi) < 1e-12);
    const PhaseCodeword m = SteerContinuous(s, Deg(-30));
    for (std::size_t n = 0; n < 8; ++n)
    {
        CHECK(CircularDistance(m.phases[n], -w.phases[n]) < 1e-12);
        CHECK(w.phases[n] >= 0.0);
        CHECK(w.phases[n] < 2.0 * kPi);
    }
}

TEST_CASE("steered pattern peaks at the target")
{
    const ArraySpec s = Spec(16, 0.5, 2.0);
    for (double target : {-40.0, -7.0, 0.0, 25.0, 50.0})
    {
        const PhaseCodeword w = SteerContinuous(s, Deg(target));
        double best = -1e9;
        double at = 0.0;
        for (double a = -90.0; a <= 90.0; a += 0.25)
        {
            const double v = ArrayFactorDirectivityDbi(s, w, Deg(a));
            if (v > best)
            {
                best = v;
                at = a;
            }
        }
        CHECK(std::abs(at - target) <= s.integrationStepDeg);
    }
}

TEST_CASE("phase quantization")
{
    CHECK(QuantizePhase(0.6 * kPi, 1) == doctest::Approx(kPi));
    CHECK(QuantizePhase(kPi / 2.0, 1) == 0.0);
    CHECK(QuantizePhase(1.9 * kPi, 2) == 0.0);
    CHECK(QuantizePhase(-0.25 * kPi + 1e-6, 2) == 0.0);
    CounterRng rng(3, 0);
    for (unsigned b = 1; b <= 4; ++b)
    {
        PhaseCodeword w = Uniform(10);
        for (double& p : w.phases)
        {
            p = rng.Uniform(-10.0, 10.0);
        }
        const PhaseCodeword q = Quantize(w, b);
        const PhaseCodeword qq = Quantize(q, b);
        CHECK(q.UniformBits() == b);
        for (std::size_t n = 0; n < 10; ++n)
        {
            CHECK(qq.phases[n] == q.phases[n]);
            const double k = q.phases[n] / (2.0 * kPi) * std::pow(2.0, b);
            CHECK(std::abs(k - std::round(k)) < 1e-9);
            CHECK(CircularDistance(q.phases[n], w.phases[n]) <= kPi / std::pow(2.0, b) + 1e-12);
        }
    }
}

TEST_CASE("quantization never helps when element powers are uncoupled")
{
    // Isotropic elements on half-wavelength multiples radiate a phase-independent total power.
    CounterRng rng(11, 0);
    for (int t = 0; t < 50; ++t)
    {
        const ArraySpec s = Spec(2 + t % 14, 0.5 * (1 + t % 4), 0.0);
        const double a = rng.Uniform(-1.3, 1.3);
        for (unsigned b = 1; b <= 4; ++b)
        {
            CHECK(QuantizationLossDb(s, a, b) >= -1e-9);
        }
    }
}

TEST_CASE("a directive element pattern lets a quantized codeword edge past conjugate steering")
{
    // With cos^2 elements at half-wavelength spacing the conjugate codeword is not the
    // directivity optimum, so a small negative loss is a property of the model.
    const ArraySpec s = Spec(4, 0.5, 2.0);
    double lowest = 0.0;
    for (double a : AngleGrid(-60, 60, 1))
    {
        for (unsigned b = 1; b <= 4; ++b)
        {
            lowest = std::min(lowest, QuantizationLossDb(s, a, b));
        }
    }
    CHECK(lowest < -1e-3);
    CHECK(lowest > -0.5);
}

TEST_CASE("quantization loss tends to the sinc^2 value on a large array")
{
    const ArraySpec s = Spec(64, 0.5, 0.0);
    CounterRng rng(1, 0);
    for (unsigned b = 1; b <= 3; ++b)
    {
        double sum = 0.0;
        for (int t = 0; t < 100; ++t)
        {
            std::vector<double> offsets(64);
            for (double& o : offsets)
            {
                o = rng.Uniform(0.0, 2.0 * kPi);
            }
            sum += QuantizationLossDb(s, 0.0, b, offsets);
        }
        CHECK(std::abs(sum / 100.0 - oracle::SincLossDb(b)) < 0.3);
        CHECK(ExpectedQuantizationLossDb(b) == doctest::Approx(oracle::SincLossDb(b)).epsilon(1e-12));
    }
}

TEST_CASE("global phase does not change the pattern")
{
    const ArraySpec s = Spec(8, 1.5, 2.0);
    const PhaseCodeword w = SteerContinuous(s, Deg(17));
    PhaseCodeword shifted = w;
    for (double& p : shifted.phases)
    {
        p += 0.777;
    }
    for (double a = -80.0; a <= 80.0; a += 10.0)
    {
        CHECK(ArrayFactorDirectivityDbi(s, shifted, Deg(a)) ==
              doctest::Approx(ArrayFactorDirectivityDbi(s, w, Deg(a))).epsilon(1e-12));
    }
}

TEST_CASE("one-element envelope is the element pattern")
{
    const ArraySpec s = Spec(1, 0.5, 2.0);
    const std::vector<unsigned> bits{1};
    const auto angles = AngleGrid(-60, 60, 5);
    const auto env = ScanLossEnvelope(s, bits, angles);
    for (std::size_t i = 0; i < angles.size(); ++i)
    {
        CHECK(env[i].directivityDbi ==
              doctest::Approx(ArrayFactorDirectivityDbi(s, Uniform(1), angles[i])).epsilon(1e-12));
    }
}

namespace
{

double
BruteForceOneBit(const ArraySpec& s, double angle)
{
    double best = -1e9;
    for (std::size_t code = 0; code < (std::size_t{1} << s.elements); ++code)
    {
        PhaseCodeword w = Uniform(s.elements);
        for (std::size_t n = 0; n < s.elements; ++n)
        {
            w.phases[n] = (code >> n & 1) ? kPi : 0.0;
        }
        best = std::max(best, ArrayFactorDirectivityDbi(s, w, angle));
    }
    return best;
}

} // namespace

TEST_CASE("exhaustive envelope equals brute force over all one-bit codewords")
{
    const std::vector<unsigned> bits(4, 1);
    const auto angles = AngleGrid(-60, 60, 1);
    for (double q : {0.0, 2.0})
    {
        for (double d : {0.5, 1.5})
        {
            const ArraySpec s = Spec(4, d, q);
            const auto e = ScanLossEnvelope(s, bits, angles);
            for (std::size_t i = 0; i < angles.size(); ++i)
            {
                CHECK(e[i].exhaustive);
                CHECK(e[i].directivityDbi == doctest::Approx(BruteForceOneBit(s, angles[i])).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("coordinate ascent on 4 one-bit elements")
{
    const std::vector<unsigned> bits(4, 1);
    const auto angles = AngleGrid(-60, 60, 1);
    EnvelopeOptions greedy;
    greedy.exhaustiveLimitBits = 0;

    SUBCASE("uncoupled isotropic elements reach the brute-force optimum")
    {
        for (double d : {0.5, 1.0, 1.5})
        {
            const ArraySpec s = Spec(4, d, 0.0);
            const auto g = ScanLossEnvelope(s, bits, angles, greedy);
            for (std::size_t i = 0; i < angles.size(); ++i)
            {
                CHECK_FALSE(g[i].exhaustive);
                CHECK(g[i].directivityDbi == doctest::Approx(BruteForceOneBit(s, angles[i])).epsilon(1e-9));
            }
        }
    }

    SUBCASE("directive elements may stop at a local optimum but never beat brute force")
    {
        const ArraySpec s = Spec(4, 0.5, 2.0);
        const auto g = ScanLossEnvelope(s, bits, angles, greedy);
        int misses = 0;
        for (std::size_t i = 0; i < angles.size(); ++i)
        {
            const double best = BruteForceOneBit(s, angles[i]);
            const double start = ArrayFactorDirectivityDbi(s, Quantize(SteerContinuous(s, angles[i]), 1), angles[i]);
            CHECK(g[i].directivityDbi <= best + 1e-9);
            CHECK(g[i].directivityDbi >= start - 1e-9);
            misses += g[i].directivityDbi < best - 1e-9;
        }
        CHECK(misses > 0);
    }
}

TEST_CASE("envelopes are ordered by phase resolution")
{
    const ArraySpec s = Spec(6, 1.0, 2.0);
    const auto angles = AngleGrid(-60, 60, 3);
    std::vector<double> previous(angles.size(), -1e9);
    for (unsigned b : {1u, 2u, 3u})
    {
        const std::vector<unsigned> bits(6, b);
        const auto env = ScanLossEnvelope(s, bits, angles);
        for (std::size_t i = 0; i < angles.size(); ++i)
        {
            CHECK(env[i].directivityDbi >= previous[i] - 1e-9);
            previous[i] = env[i].directivityDbi;
        }
    }
    const std::vector<unsigned> continuous(6, kContinuousPhase);
    const auto env = ScanLossEnvelope(s, continuous, angles);
    for (std::size_t i = 0; i < angles.size(); ++i)
    {
        CHECK(env[i].directivityDbi >= previous[i] - 1e-9);
    }
}

TEST_CASE("hybrid assignment alternates one and two bits")
{
    CHECK(HybridBits(5) == std::vector<unsigned>{1, 2, 1, 2, 1});
}

TEST_CASE("RIS codebook construction")
{
    const ArraySpec s = Spec(16, 0.5, 0.0);
    const std::vector<double> normal{0.0};
    const Codebook specular = BuildRisCodebook(s, 0.0, normal, 2);
    for (double p : specular.entries[0].codeword.phases)
    {
        CHECK(p == specular.entries[0].codeword.phases[0]);
    }

    const std::vector<double> one{Deg(35)};
    const std::vector<double> other{Deg(-20)};
    const Codebook ab = BuildRisCodebook(s, Deg(-20), one, kContinuousPhase);
    const Codebook ba = BuildRisCodebook(s, Deg(35), other, kContinuousPhase);
    for (std::size_t n = 0; n < 16; ++n)
    {
        CHECK(CircularDistance(ab.entries[0].codeword.phases[n], ba.entries[0].codeword.phases[n]) < 1e-12);
    }

    CHECK_THROWS_AS(BuildRisCodebook(s, Deg(95), one, 2), std::domain_error);
    CHECK_THROWS_AS(BuildRisCodebook(s, Deg(10), std::vector<double>{Deg(-91)}, 2), std::domain_error);
}

TEST_CASE("codebook beams peak at their departure direction")
{
    const ArraySpec s = Spec(16, 0.5, 0.0);
    const double incident = Deg(25);
    const auto departures = AngleGrid(-60, 60, 5);
    const Codebook book = BuildRisCodebook(s, incident, departures, kContinuousPhase);
    REQUIRE(book.entries.size() == departures.size());
    for (std::size_t k = 0; k < departures.size(); ++k)
    {
        double best = -1e9;
        double at = 0.0;
        for (double scan : departures)
        {
            const double v = BistaticArrayFactorDb(s, book.entries[k].codeword, incident, scan);
            if (v > best)
            {
                best = v;
                at = scan;
            }
        }
        CHECK(at == departures[k]);
        CHECK(best == doctest::Approx(0.0).epsilon(1e-9));
    }
}

TEST_CASE("codebook JSON round trip at 9 significant digits")
{
    const ArraySpec s = Spec(8, 0.5, 0.0);
    const std::vector<double> departures{Deg(-30), Deg(0), Deg(41)};
    const Codebook book = BuildRisCodebook(s, Deg(12), departures, kContinuousPhase);
    const std::string text = CodebookToJson(book);
    const Codebook back = CodebookFromJson(text);
    REQUIRE(back.entries.size() == 3);
    for (std::size_t k = 0; k < 3; ++k)
    {
        for (std::size_t n = 0; n < 8; ++n)
        {
            CHECK(back.entries[k].codeword.phases[n] ==
                  doctest::Approx(book.entries[k].codeword.phases[n]).epsilon(1e-8));
        }
    }
    CHECK(CodebookToJson(back) == text);
}

TEST_CASE("wide beam keeps a higher floor across its sector")
{
    const ArraySpec s = Spec(16, 0.5, 2.0);
    const double centre = Deg(10);
    const double width = Deg(40);
    const PhaseCodeword narrow = Quantize(SteerContinuous(s, centre), 2);
    const PhaseCodeword wide = SynthesizeWideBeam(s, centre, width, 2);
    CHECK(MinDirectivityOverSectorDbi(s, wide, centre, width) >
          MinDirectivityOverSectorDbi(s, narrow, centre, width) + 3.0);
    CHECK(wide.UniformBits() == 2u);
}

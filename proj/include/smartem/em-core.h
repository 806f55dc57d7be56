#ifndef SMARTEM_EM_CORE_H
#define SMARTEM_EM_CORE_H

namespace smartem
{

/// Speed of light in vacuum, m/s.
inline constexpr double kSpeedOfLight = 299792458.0;

/// Thermal noise floor at 290 K, dBm/Hz.
inline constexpr double kThermalNoiseDbmPerHz = -174.0;

double DbToLinear(double db);
double LinearToDb(double linear);

/// Wavelength in meters. Throws std::domain_error for non-positive frequency.
double Wavelength(double frequencyHz);

/**
 * Free-space path loss 20*log10(4*pi*d*f/c).
 *
 * Throws std::domain_error when distance or frequency is not strictly positive.
 */
double FsplDb(double distanceM, double frequencyHz);

/// -174 dBm/Hz + 10*log10(B) + NF. Throws std::domain_error for B <= 0.
double NoisePowerDbm(double bandwidthHz, double noiseFigureDb);

double SnrDb(double rxPowerDbm, double bandwidthHz, double noiseFigureDb);

/// B * log2(1 + snr). The only place where link math leaves the dB domain.
double CapacityFromSnrDb(double snrDb, double bandwidthHz);

double ShannonCapacityBps(double rxPowerDbm, double bandwidthHz, double noiseFigureDb);

/**
 * Additive dB ledger of a single (possibly relayed) link.
 *
 * rxPowerDbm is always produced by Compose() so the identity
 * rx = eirp - pathLoss + extraGain - penetration + rxGain holds bit-exactly.
 */
struct LinkBudgetTerms
{
    double eirpDbm = 0.0;
    double pathLossDb = 0.0;
    double extraGainDb = 0.0;
    double penetrationDb = 0.0;
    double rxGainDbi = 0.0;
    double rxPowerDbm = 0.0;

    static LinkBudgetTerms Compose(double eirpDbm,
                                   double pathLossDb,
                                   double extraGainDb,
                                   double penetrationDb,
                                   double rxGainDbi);

    bool LedgerHolds() const;
};

} // namespace smartem

#endif // SMARTEM_EM_CORE_H

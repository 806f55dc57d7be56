#ifndef SMARTEM_REPORT_IO_H
#define SMARTEM_REPORT_IO_H

#include "smartem/arrays.h"
#include "smartem/scenario-io.h"
#include "smartem/simulate.h"
#include "smartem/src-outage.h"

#include <ostream>
#include <string>
#include <vector>

namespace smartem
{

/// "%.9g" rendering shared by every CSV writer.
std::string FormatNumber(double v);

/// Rounds to 9 significant digits so JSON output matches the CSV precision.
double RoundSignificant(double v);

/// One row per evaluated point: x, y, rx_power_dbm, capacity_bps, serving_path.
void WriteCoverageCsv(std::ostream& out, const CoverageReport& report, const Scenario& scenario);

/// Two columns: value, probability.
void WriteCdfCsv(std::ostream& out, const std::vector<CdfPoint>& cdf);

/// Coverage fraction, point counts and the percentile table.
std::string CoverageSummaryJson(const CoverageReport& report);

/// Coverage summary with the delta against a baseline report.
std::string CoverageSummaryJson(const CoverageReport& report, const CoverageReport& baseline);

void WriteSrcCsv(std::ostream& out, const std::vector<SrcEstimate>& rows);

struct EnvelopeColumn
{
    std::string name;
    std::vector<EnvelopePoint> points;
};

/// angle_deg then one directivity column per envelope.
void WriteEnvelopeCsv(std::ostream& out, const std::vector<EnvelopeColumn>& columns);

} // namespace smartem

#endif // SMARTEM_REPORT_IO_H

#include "smartem/report-io.h"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

namespace smartem
{

namespace
{

using nlohmann::json;

json
PercentileTable(const CoverageReport& report)
{
    json rows = json::array();
    for (const PercentileRow& r : report.percentiles)
    {
        rows.push_back({{"probability", RoundSignificant(r.probability)},
                        {"rx_power_dbm", RoundSignificant(r.rxPowerDbm)},
                        {"capacity_bps", RoundSignificant(r.capacityBps)}});
    }
    return rows;
}

json
SummaryObject(const CoverageReport& report)
{
    return {{"points", report.points.size()},
            {"indoor_points_excluded", report.indoorPoints},
            {"covered_points", report.coveredPoints},
            {"coverage_threshold_dbm", RoundSignificant(report.thresholdDbm)},
            {"coverage_fraction", RoundSignificant(report.coverageFraction)},
            {"percentiles", PercentileTable(report)}};
}

} // namespace

std::string
FormatNumber(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

double
RoundSignificant(double v)
{
    if (!std::isfinite(v))
    {
        return v;
    }
    return std::strtod(FormatNumber(v).c_str(), nullptr);
}

void
WriteCoverageCsv(std::ostream& out, const CoverageReport& report, const Scenario& scenario)
{
    out << "x,y,rx_power_dbm,capacity_bps,serving_path\n";
    for (const LinkResult& p : report.points)
    {
        out << FormatNumber(p.position.x) << ',' << FormatNumber(p.position.y) << ',' << FormatNumber(p.rxPowerDbm)
            << ',' << FormatNumber(p.capacityBps) << ',' << DescribePath(p.path, scenario) << '\n';
    }
}

void
WriteCdfCsv(std::ostream& out, const std::vector<CdfPoint>& cdf)
{
    out << "value,probability\n";
    for (const CdfPoint& p : cdf)
    {
        out << FormatNumber(p.value) << ',' << FormatNumber(p.probability) << '\n';
    }
}

std::string
CoverageSummaryJson(const CoverageReport& report)
{
    return SummaryObject(report).dump(2) + "\n";
}

std::string
CoverageSummaryJson(const CoverageReport& report, const CoverageReport& baseline)
{
    const DeltaReport delta = CompareReports(baseline, report);
    json rows = json::array();
    for (const PercentileDelta& d : delta.percentiles)
    {
        rows.push_back({{"probability", RoundSignificant(d.probability)},
                        {"rx_power_delta_db", RoundSignificant(d.rxPowerDeltaDb)},
                        {"capacity_delta_bps", RoundSignificant(d.capacityDeltaBps)},
                        {"capacity_ratio", RoundSignificant(d.capacityRatio)}});
    }
    json doc = SummaryObject(report);
    doc["baseline"] = SummaryObject(baseline);
    doc["delta"] = {{"coverage_fraction", RoundSignificant(delta.coverageDelta)},
                    {"cell_edge_rx_power_db", RoundSignificant(delta.cellEdgePowerDeltaDb)},
                    {"median_capacity_ratio", RoundSignificant(delta.medianCapacityRatio)},
                    {"percentiles", rows}};
    return doc.dump(2) + "\n";
}

void
WriteSrcCsv(std::ostream& out, const std::vector<SrcEstimate>& rows)
{
    out << "separation_deg,primary_length_m,reflected_length_m,trials,outages,outage_probability,ci_low,ci_high\n";
    for (const SrcEstimate& r : rows)
    {
        out << FormatNumber(r.geometry.separationDeg) << ',' << FormatNumber(r.geometry.primaryLengthM) << ','
            << FormatNumber(r.geometry.reflectedLengthM) << ',' << r.trials << ',' << r.outages << ','
            << FormatNumber(r.outage.estimate) << ',' << FormatNumber(r.outage.low) << ','
            << FormatNumber(r.outage.high) << '\n';
    }
}

void
WriteEnvelopeCsv(std::ostream& out, const std::vector<EnvelopeColumn>& columns)
{
    if (columns.empty())
    {
        throw std::invalid_argument("no envelope columns");
    }
    out << "angle_deg";
    for (const EnvelopeColumn& c : columns)
    {
        if (c.points.size() != columns.front().points.size())
        {
            throw std::invalid_argument("envelope columns differ in length");
        }
        out << ',' << c.name;
    }
    out << '\n';
    for (std::size_t i = 0; i < columns.front().points.size(); ++i)
    {
        out << FormatNumber(columns.front().points[i].angleRad * 180.0 / std::numbers::pi);
        for (const EnvelopeColumn& c : columns)
        {
            out << ',' << FormatNumber(c.points[i].directivityDbi);
        }
        out << '\n';
    }
}

} // namespace smartem

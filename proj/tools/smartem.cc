/*
 * smartem: command-line front end for coverage, CDF, planning, SRC outage
 * and scan-loss envelope runs.
 *
 * Every run writes manifest.json next to its outputs.  Precedence for
 * settings is flags, then the scenario/plan file, then built-in defaults.
 */

#include "smartem/arrays.h"
#include "smartem/plan-io.h"
#include "smartem/plan.h"
#include "smartem/report-io.h"
#include "smartem/scenario-io.h"
#include "smartem/simulate.h"
#include "smartem/src-outage.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace smartem;

namespace
{

constexpr const char* kVersion = "0.1.0";

enum ExitCode
{
    kOk = 0,
    kUsageError = 1,
    kViolations = 2,
    kInfeasible = 3,
};

class RunError : public std::runtime_error
{
  public:
    explicit RunError(const std::string& what)
        : std::runtime_error(what)
    {
    }
};

struct RunConfig
{
    std::string command;
    std::string scenarioPath;
    std::string planPath;
    std::string outDir;
    std::optional<std::uint64_t> seed;
    std::optional<double> thresholdDbm;
    std::optional<double> bandwidthHz;
    std::vector<std::string> bits;
    std::vector<double> targets;

    // envelope
    std::size_t elements = 8;
    double spacing = 1.5;
    double exponent = 2.0;
    double minDeg = -60.0;
    double maxDeg = 60.0;
    double stepDeg = 1.0;

    // src
    double density = 0.01;
    double radius = 0.3;
    double selfBlockageDeg = 60.0;
    std::size_t trials = 10000;
    double primaryLength = 50.0;
    double reflectedLength = 30.0;
    std::vector<double> separations{10, 20, 30, 45, 60, 90, 120, 150, 180};
    std::vector<double> lengths;
};

class Manifest
{
  public:
    explicit Manifest(const RunConfig& c)
    {
        m_doc["tool"] = "smartem";
        m_doc["version"] = kVersion;
        m_doc["command"] = c.command;
        m_doc["seed"] = c.seed ? json(*c.seed) : json(nullptr);
        m_doc["applied_defaults"] = json::array();
        m_doc["outputs"] = json::array();
        m_doc["warnings"] = json::array();
    }

    json& Config()
    {
        return m_doc["config"];
    }

    void AddDefaults(const std::vector<AppliedDefault>& defaults, const std::string& source)
    {
        for (const AppliedDefault& d : defaults)
        {
            m_doc["applied_defaults"].push_back({{"source", source}, {"field", d.path}, {"value", d.value}});
            std::cerr << "default " << source << ":" << d.path << " = " << d.value << "\n";
        }
    }

    void AddDefault(const std::string& field, const std::string& value)
    {
        AddDefaults({{field, value}}, "flags");
    }

    void Warn(const std::string& message)
    {
        m_doc["warnings"].push_back(message);
        std::cerr << "warning: " << message << "\n";
    }

    void Output(const std::string& name)
    {
        m_doc["outputs"].push_back(name);
    }

    void Write(const fs::path& dir) const
    {
        std::ofstream out(dir / "manifest.json", std::ios::binary);
        out << m_doc.dump(2) << "\n";
        if (!out)
        {
            throw RunError("cannot write " + (dir / "manifest.json").string());
        }
    }

  private:
    json m_doc;
};

void
WriteFile(const fs::path& dir, const std::string& name, const std::string& content, Manifest& manifest)
{
    std::ofstream out(dir / name, std::ios::binary);
    out << content;
    if (!out)
    {
        throw RunError("cannot write " + (dir / name).string());
    }
    manifest.Output(name);
}

template <typename Writer>
void
WriteStream(const fs::path& dir, const std::string& name, Manifest& manifest, Writer&& writer)
{
    std::ofstream out(dir / name, std::ios::binary);
    writer(out);
    if (!out)
    {
        throw RunError("cannot write " + (dir / name).string());
    }
    manifest.Output(name);
}

fs::path
PrepareOutDir(const RunConfig& c)
{
    if (c.outDir.empty())
    {
        throw RunError("--out is required");
    }
    std::error_code ec;
    fs::create_directories(c.outDir, ec);
    if (ec || !fs::is_directory(c.outDir))
    {
        throw RunError("cannot create output directory " + c.outDir);
    }
    return c.outDir;
}

/// Removes defaults a flag has replaced.
std::vector<AppliedDefault>
WithoutOverridden(std::vector<AppliedDefault> defaults, const RunConfig& c)
{
    std::erase_if(defaults, [&](const AppliedDefault& d) {
        return (c.thresholdDbm && d.path == "radio.coverage_threshold_dbm") ||
               (c.bandwidthHz && d.path == "radio.bandwidth_hz") ||
               (!c.bits.empty() && d.path.ends_with(".bits"));
    });
    return defaults;
}

std::optional<unsigned>
SingleBitsOverride(const RunConfig& c)
{
    if (c.bits.empty())
    {
        return std::nullopt;
    }
    if (c.bits.size() != 1 || c.bits[0].size() != 1 || c.bits[0][0] < '1' || c.bits[0][0] > '4')
    {
        throw RunError("--bits for this command takes one value in 1..4");
    }
    return static_cast<unsigned>(c.bits[0][0] - '0');
}

void
ApplyOverrides(Scenario& s, const RunConfig& c)
{
    if (c.thresholdDbm)
    {
        s.radio.coverageThresholdDbm = *c.thresholdDbm;
    }
    if (c.bandwidthHz)
    {
        s.radio.bandwidthHz = *c.bandwidthHz;
    }
    if (const auto bits = SingleBitsOverride(c))
    {
        for (PlacedNode& n : s.nodes)
        {
            if (auto* ris = std::get_if<RisSpec>(&n.spec))
            {
                ris->bits = *bits;
            }
        }
    }
}

json
ScenarioConfigEcho(const RunConfig& c, const Scenario& s)
{
    json j;
    j["scenario"] = c.scenarioPath;
    j["out"] = c.outDir;
    j["radio"] = {{"carrier_frequency_hz", s.radio.carrierFrequencyHz},
                  {"bandwidth_hz", s.radio.bandwidthHz},
                  {"noise_figure_db", s.radio.noiseFigureDb},
                  {"ue_antenna_gain_dbi", s.radio.ueAntennaGainDbi},
                  {"coverage_threshold_dbm", s.radio.coverageThresholdDbm}};
    j["grid"] = {{"nx", s.grid.nx},
                 {"ny", s.grid.ny},
                 {"spacing_m", s.grid.spacingM},
                 {"ue_height_m", s.grid.ueHeightM}};
    j["nodes"] = s.nodes.size();
    j["buildings"] = s.buildings.size();
    j["overrides"] = {{"threshold_dbm", c.thresholdDbm ? json(*c.thresholdDbm) : json(nullptr)},
                      {"bandwidth_hz", c.bandwidthHz ? json(*c.bandwidthHz) : json(nullptr)},
                      {"bits", c.bits}};
    return j;
}

/// Loads, overrides and validates the scenario; returns false after printing violations.
bool
LoadChecked(const RunConfig& c, Scenario& out, Manifest* manifest)
{
    if (c.scenarioPath.empty())
    {
        throw RunError("--scenario is required");
    }
    LoadedScenario loaded = LoadScenario(c.scenarioPath);
    ApplyOverrides(loaded.scenario, c);
    if (manifest)
    {
        manifest->AddDefaults(WithoutOverridden(loaded.defaults, c), "scenario");
    }
    const std::vector<Violation> violations = Validate(loaded.scenario);
    for (const Violation& v : violations)
    {
        std::cerr << "violation: " << v.entity << ": " << v.rule << "\n";
    }
    out = std::move(loaded.scenario);
    return violations.empty();
}

int
RunValidate(const RunConfig& c)
{
    Scenario s;
    if (!LoadChecked(c, s, nullptr))
    {
        return kViolations;
    }
    std::cout << "ok: " << s.buildings.size() << " buildings, " << s.nodes.size() << " nodes, " << s.grid.Size()
              << " grid points\n";
    return kOk;
}

int
RunCoverage(const RunConfig& c)
{
    Manifest manifest(c);
    Scenario s;
    if (!LoadChecked(c, s, &manifest))
    {
        return kViolations;
    }
    const fs::path dir = PrepareOutDir(c);
    manifest.Config() = ScenarioConfigEcho(c, s);
    const CoverageReport report = EvaluateGrid(s);
    const CoverageReport baseline = EvaluateGrid(GnbOnly(s));
    WriteStream(dir, "coverage.csv", manifest, [&](std::ostream& o) { WriteCoverageCsv(o, report, s); });
    WriteFile(dir, "summary.json", CoverageSummaryJson(report, baseline), manifest);
    manifest.Write(dir);
    std::cout << "coverage " << FormatNumber(report.coverageFraction) << " (gNB only "
              << FormatNumber(baseline.coverageFraction) << ")\n";
    return kOk;
}

int
RunCdf(const RunConfig& c)
{
    Manifest manifest(c);
    Scenario s;
    if (!LoadChecked(c, s, &manifest))
    {
        return kViolations;
    }
    const fs::path dir = PrepareOutDir(c);
    manifest.Config() = ScenarioConfigEcho(c, s);
    const CoverageReport report = EvaluateGrid(s);
    const CoverageReport baseline = EvaluateGrid(GnbOnly(s));
    if (report.points.empty())
    {
        throw RunError("no outdoor grid points to build a CDF from");
    }
    auto emit = [&](const std::string& prefix, const CoverageReport& r) {
        const std::vector<double> power = RxPowers(r);
        const std::vector<double> capacity = Capacities(r);
        WriteStream(dir, prefix + "cdf_rx_power.csv", manifest, [&](std::ostream& o) {
            WriteCdfCsv(o, EmpiricalCdf(power));
        });
        WriteStream(dir, prefix + "cdf_capacity.csv", manifest, [&](std::ostream& o) {
            WriteCdfCsv(o, EmpiricalCdf(capacity));
        });
    };
    emit("", report);
    emit("baseline_", baseline);
    manifest.Write(dir);
    return kOk;
}

int
RunPlan(const RunConfig& c)
{
    Manifest manifest(c);
    Scenario s;
    if (!LoadChecked(c, s, &manifest))
    {
        return kViolations;
    }
    if (c.planPath.empty())
    {
        throw RunError("--plan is required");
    }
    PlanFile file = LoadPlanFile(c.planPath);
    manifest.AddDefaults(WithoutOverridden(file.defaults, c), "plan");
    if (const auto bits = SingleBitsOverride(c))
    {
        file.templates.ris.bits = *bits;
    }
    if (!c.targets.empty())
    {
        file.coverageTargets = c.targets;
    }
    const fs::path dir = PrepareOutDir(c);

    PlanProblem problem;
    problem.scenario = s;
    problem.sites = file.sites;
    problem.costs = file.costs;
    problem.templates = file.templates;
    for (const std::string& w : problem.costs.Warnings())
    {
        manifest.Warn(w);
    }
    json& config = manifest.Config();
    config = ScenarioConfigEcho(c, s);
    config["plan"] = c.planPath;
    config["coverage_targets"] = file.coverageTargets;
    config["max_moves"] = file.maxMoves;
    config["candidates"] = problem.sites.size();

    const std::vector<PlanSolution> solutions = ParetoSweep(problem, file.coverageTargets, file.maxMoves);
    WriteFile(dir, "plan.json", PlanSolutionsToJson(problem, solutions), manifest);
    const Scenario deployed = BuildDeployment(problem, solutions.back().selections);
    const CoverageReport report = EvaluateGrid(deployed);
    WriteStream(dir, "coverage.csv", manifest, [&](std::ostream& o) { WriteCoverageCsv(o, report, deployed); });
    WriteFile(dir, "summary.json", CoverageSummaryJson(report, EvaluateGrid(s)), manifest);
    manifest.Write(dir);

    bool feasible = true;
    for (const PlanSolution& sol : solutions)
    {
        std::cout << "target " << FormatNumber(sol.coverageTarget) << ": cost " << FormatNumber(sol.totalCost)
                  << ", coverage " << FormatNumber(sol.coverageFraction) << (sol.feasible ? "" : " (infeasible)")
                  << "\n";
        feasible = feasible && sol.feasible;
    }
    return feasible ? kOk : kInfeasible;
}

int
RunSrc(const RunConfig& c)
{
    if (!c.seed)
    {
        throw RunError("--seed is required for src");
    }
    Manifest manifest(c);
    const fs::path dir = PrepareOutDir(c);
    SrcOptions options;
    options.obstacles.densityPerM2 = c.density;
    options.obstacles.minRadiusM = c.radius;
    options.obstacles.maxRadiusM = c.radius;
    options.selfBlockageWidthDeg = c.selfBlockageDeg;
    options.trials = c.trials;
    options.seed = *c.seed;
    SrcGeometry geometry;
    geometry.primaryLengthM = c.primaryLength;
    geometry.reflectedLengthM = c.reflectedLength;
    manifest.Config() = {{"out", c.outDir},
                         {"density_per_m2", c.density},
                         {"radius_m", c.radius},
                         {"self_blockage_deg", c.selfBlockageDeg},
                         {"trials", c.trials},
                         {"primary_length_m", c.primaryLength},
                         {"reflected_length_m", c.reflectedLength},
                         {"separations_deg", c.separations},
                         {"lengths_m", c.lengths}};
    WriteStream(dir, "src_outage.csv", manifest, [&](std::ostream& o) {
        WriteSrcCsv(o, SweepSeparation(geometry, c.separations, options));
    });
    if (!c.lengths.empty())
    {
        WriteStream(dir, "src_length.csv", manifest, [&](std::ostream& o) {
            WriteSrcCsv(o, LinkLengthSensitivity(geometry, c.lengths, options));
        });
    }
    manifest.Write(dir);
    return kOk;
}

int
RunEnvelope(const RunConfig& c)
{
    Manifest manifest(c);
    const fs::path dir = PrepareOutDir(c);
    ArraySpec spec;
    spec.elements = c.elements;
    spec.spacingWavelengths = c.spacing;
    spec.elementExponent = c.exponent;
    CheckArraySpec(spec);
    if (!(c.stepDeg > 0.0) || c.maxDeg < c.minDeg || c.minDeg < -90.0 || c.maxDeg > 90.0)
    {
        throw RunError("angle range must satisfy -90 <= min <= max <= 90 with step > 0");
    }
    std::vector<double> angles;
    const auto steps = static_cast<std::size_t>(std::floor((c.maxDeg - c.minDeg) / c.stepDeg + 1e-9));
    for (std::size_t i = 0; i <= steps; ++i)
    {
        angles.push_back((c.minDeg + static_cast<double>(i) * c.stepDeg) * std::numbers::pi / 180.0);
    }
    std::vector<std::string> names = c.bits;
    if (names.empty())
    {
        names = {"continuous", "2", "hybrid", "1"};
        manifest.AddDefault("bits", "continuous,2,hybrid,1");
    }
    std::vector<EnvelopeColumn> columns;
    for (const std::string& name : names)
    {
        std::vector<unsigned> bits;
        std::string column;
        if (name == "continuous")
        {
            bits.assign(spec.elements, kContinuousPhase);
            column = "continuous_dbi";
        }
        else if (name == "hybrid")
        {
            bits = HybridBits(spec.elements);
            column = "hybrid_dbi";
        }
        else if (name.size() == 1 && name[0] >= '1' && name[0] <= '4')
        {
            bits.assign(spec.elements, static_cast<unsigned>(name[0] - '0'));
            column = "bits_" + name + "_dbi";
        }
        else
        {
            throw RunError("unknown --bits entry \"" + name + "\" (use 1..4, hybrid or continuous)");
        }
        columns.push_back({column, ScanLossEnvelope(spec, bits, angles)});
    }
    manifest.Config() = {{"out", c.outDir},
                         {"elements", c.elements},
                         {"spacing_wavelengths", c.spacing},
                         {"element_exponent", c.exponent},
                         {"min_deg", c.minDeg},
                         {"max_deg", c.maxDeg},
                         {"step_deg", c.stepDeg},
                         {"bits", names}};
    WriteStream(dir, "envelope.csv", manifest, [&](std::ostream& o) { WriteEnvelopeCsv(o, columns); });
    manifest.Write(dir);
    return kOk;
}

} // namespace

int
main(int argc, char** argv)
{
    RunConfig c;
    CLI::App app{"Deterministic mmWave Smart-EM coverage simulator and planner", "smartem"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    auto scenarioOptions = [&](CLI::App* sub) {
        sub->add_option("--scenario", c.scenarioPath, "Scenario JSON file")->required();
        sub->add_option("--threshold-dbm", c.thresholdDbm, "Coverage threshold override, dBm");
        sub->add_option("--bandwidth", c.bandwidthHz, "Bandwidth override, Hz");
        sub->add_option("--bits", c.bits, "RIS phase bits override (1..4)")->delimiter(',');
    };
    auto outOption = [&](CLI::App* sub) {
        sub->add_option("--out", c.outDir, "Output directory")->required();
        sub->add_option("--seed", c.seed, "Random seed (recorded in the manifest)");
    };

    CLI::App* validate = app.add_subcommand("validate", "Check a scenario and list every violation");
    scenarioOptions(validate);

    CLI::App* coverage = app.add_subcommand("coverage", "Coverage map CSV and summary JSON");
    scenarioOptions(coverage);
    outOption(coverage);

    CLI::App* cdf = app.add_subcommand("cdf", "Rx power and capacity CDFs, with a gNB-only baseline");
    scenarioOptions(cdf);
    outOption(cdf);

    CLI::App* plan = app.add_subcommand("plan", "Choose node placements meeting a coverage target");
    scenarioOptions(plan);
    outOption(plan);
    plan->add_option("--plan", c.planPath, "Plan JSON file (candidates, costs, targets)")->required();
    plan->add_option("--target", c.targets, "Coverage target(s) overriding the plan file")->delimiter(',');

    CLI::App* src = app.add_subcommand("src", "SRC outage against angular separation");
    outOption(src);
    src->add_option("--density", c.density, "Obstacle density per m^2");
    src->add_option("--radius", c.radius, "Obstacle radius, m");
    src->add_option("--self-blockage-deg", c.selfBlockageDeg, "Self-blockage sector width, degrees");
    src->add_option("--trials", c.trials, "Monte Carlo trials per row");
    src->add_option("--primary-length", c.primaryLength, "Primary path length, m");
    src->add_option("--reflected-length", c.reflectedLength, "Reflected path length, m");
    src->add_option("--separations", c.separations, "Separation angles, degrees")->delimiter(',');
    src->add_option("--lengths", c.lengths, "Link lengths for the length-sensitivity table, m")->delimiter(',');

    CLI::App* envelope = app.add_subcommand("envelope", "Optimized scan-loss envelopes");
    outOption(envelope);
    envelope->add_option("--elements", c.elements, "Number of array elements");
    envelope->add_option("--spacing", c.spacing, "Element spacing, wavelengths");
    envelope->add_option("--exponent", c.exponent, "Element pattern exponent q of cos^q");
    envelope->add_option("--min-deg", c.minDeg, "First scan angle, degrees");
    envelope->add_option("--max-deg", c.maxDeg, "Last scan angle, degrees");
    envelope->add_option("--step", c.stepDeg, "Scan angle step, degrees");
    envelope->add_option("--bits", c.bits, "Columns: 1..4, hybrid, continuous")->delimiter(',');

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsageError;
    }

    try
    {
        if (validate->parsed())
        {
            c.command = "validate";
            return RunValidate(c);
        }
        if (coverage->parsed())
        {
            c.command = "coverage";
            return RunCoverage(c);
        }
        if (cdf->parsed())
        {
            c.command = "cdf";
            return RunCdf(c);
        }
        if (plan->parsed())
        {
            c.command = "plan";
            return RunPlan(c);
        }
        if (src->parsed())
        {
            c.command = "src";
            return RunSrc(c);
        }
        c.command = "envelope";
        return RunEnvelope(c);
    }
    catch (const ParseError& e)
    {
        std::cerr << "error: ";
        if (e.Line() > 0)
        {
            std::cerr << "line " << e.Line() << ", column " << e.Column() << ": ";
        }
        std::cerr << e.what() << "\n";
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
    }
    return kUsageError;
}

#include "smartem/plan.h"

#include "smartem/parallel.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace smartem
{

namespace
{

/// Circular mean of two azimuths, degrees.
double
Bisector(double a, double b)
{
    const double ra = a * std::numbers::pi / 180.0;
    const double rb = b * std::numbers::pi / 180.0;
    return std::atan2(std::sin(ra) + std::sin(rb), std::cos(ra) + std::cos(rb)) * 180.0 / std::numbers::pi;
}

bool
IsSurface(NodeClass cls)
{
    return cls == NodeClass::Ris || cls == NodeClass::Skin;
}

/// Nearest gNB with line of sight to p, if any.
const PlacedNode*
NearestLosGnb(const Scenario& scenario, const Point3& p)
{
    const PlacedNode* best = nullptr;
    double bestDistance = 0.0;
    for (const PlacedNode& n : scenario.nodes)
    {
        if (ClassOf(n.spec) != NodeClass::Gnb || n.position == p || !IsLos(n.position, p, scenario.buildings))
        {
            continue;
        }
        const double d = Distance(n.position, p);
        if (!best || d < bestDistance)
        {
            best = &n;
            bestDistance = d;
        }
    }
    return best;
}

class Evaluator
{
  public:
    explicit Evaluator(const PlanProblem& problem)
        : m_problem(problem)
    {
    }

    CoverageReport Evaluate(const std::vector<Selection>& selections)
    {
        ++m_count;
        EvaluateOptions options;
        options.workers = m_innerWorkers;
        return EvaluateGrid(BuildDeployment(m_problem, selections), options);
    }

    /// Evaluates many deployments, spreading them over workers.
    std::vector<CoverageReport> EvaluateMany(const std::vector<std::vector<Selection>>& deployments)
    {
        std::vector<CoverageReport> out(deployments.size());
        m_count += deployments.size();
        ParallelFor(
            deployments.size(),
            [&](std::size_t i) {
                EvaluateOptions options;
                options.workers = 1;
                out[i] = EvaluateGrid(BuildDeployment(m_problem, deployments[i]), options);
            },
            m_problem.workers);
        return out;
    }

    std::size_t Count() const
    {
        return m_count;
    }

  private:
    const PlanProblem& m_problem;
    std::size_t m_count = 0;
    std::size_t m_innerWorkers = 0;
};

double
TotalCost(const PlanProblem& problem, const std::vector<Selection>& selections)
{
    double total = 0.0;
    for (const Selection& s : selections)
    {
        total += SelectionCost(problem, s);
    }
    return total;
}

void
SortSelections(std::vector<Selection>& selections)
{
    std::sort(selections.begin(), selections.end(), [](const Selection& a, const Selection& b) {
        return a.site < b.site;
    });
}

PlanSolution
MakeSolution(const PlanProblem& problem,
             std::vector<Selection> selections,
             const CoverageReport& report,
             double target,
             std::size_t evaluations)
{
    SortSelections(selections);
    PlanSolution s;
    s.selections = std::move(selections);
    s.totalCost = TotalCost(problem, s.selections);
    s.coverageFraction = report.coverageFraction;
    s.coveredPoints = report.coveredPoints;
    if (!report.percentiles.empty())
    {
        s.cellEdgePowerDbm = report.Percentile(kCellEdgeProbability).rxPowerDbm;
        s.medianCapacityBps = report.Percentile(0.5).capacityBps;
    }
    s.coverageTarget = target;
    s.feasible = report.coveredPoints >= RequiredPoints(target, report.points.size());
    s.evaluations = evaluations;
    return s;
}

} // namespace

std::vector<std::string>
CostModel::Warnings() const
{
    std::vector<std::string> out;
    for (NodeClass c : kAllNodeClasses)
    {
        if (!(UnitCost(c) > 0.0))
        {
            out.push_back("cost of " + std::string(ToString(c)) + " is not positive");
        }
    }
    for (std::size_t i = 0; i + 1 < unitCost.size(); ++i)
    {
        if (!(unitCost[i] > unitCost[i + 1]))
        {
            out.push_back("cost of " + std::string(ToString(kAllNodeClasses[i])) + " does not exceed cost of " +
                          std::string(ToString(kAllNodeClasses[i + 1])));
        }
    }
    if (powerWeightPerW < 0.0)
    {
        out.push_back("power weight is negative");
    }
    return out;
}

PlacedNode
MakeNode(const PlanProblem& problem, const Selection& selection)
{
    const CandidateSite& site = problem.sites.at(selection.site);
    PlacedNode node;
    node.id = site.id + "-" + std::string(ToString(selection.cls));
    node.position = site.position;
    node.azimuthDeg = selection.orientationDeg;
    switch (selection.cls)
    {
    case NodeClass::Iab:
        node.spec = problem.templates.iab;
        break;
    case NodeClass::Repeater:
        node.spec = problem.templates.repeater;
        break;
    case NodeClass::Ris:
        node.spec = problem.templates.ris;
        break;
    case NodeClass::Skin: {
        SkinSpec skin = problem.templates.skin;
        skin.departureAzimuthDeg = selection.orientationDeg;
        if (const PlacedNode* gnb = NearestLosGnb(problem.scenario, site.position))
        {
            skin.incidentAzimuthDeg = AzimuthDeg(site.position.Xy(), gnb->position.Xy());
        }
        node.azimuthDeg = Bisector(skin.incidentAzimuthDeg, skin.departureAzimuthDeg);
        node.spec = skin;
        break;
    }
    case NodeClass::Gnb:
        throw std::domain_error("the planner does not place gNBs");
    }
    return node;
}

double
SelectionCost(const PlanProblem& problem, const Selection& selection)
{
    const PlacedNode node = MakeNode(problem, selection);
    return problem.costs.UnitCost(selection.cls) +
           problem.costs.powerWeightPerW * PowerConsumptionW(node.spec, problem.scenario.radio.carrierFrequencyHz);
}

std::vector<PlanOption>
EnumerateOptions(const PlanProblem& problem)
{
    std::vector<PlanOption> out;
    for (std::size_t i = 0; i < problem.sites.size(); ++i)
    {
        const CandidateSite& site = problem.sites[i];
        const bool reachable = NearestLosGnb(problem.scenario, site.position) != nullptr;
        for (NodeClass c : kAllNodeClasses)
        {
            if (c == NodeClass::Gnb || std::find(site.classes.begin(), site.classes.end(), c) == site.classes.end())
            {
                continue;
            }
            if (IsSurface(c) && !reachable)
            {
                continue;
            }
            for (double o : site.orientationsDeg)
            {
                Selection s{i, c, o};
                out.push_back({s, SelectionCost(problem, s)});
            }
        }
    }
    return out;
}

Scenario
BuildDeployment(const PlanProblem& problem, const std::vector<Selection>& selections)
{
    Scenario out = problem.scenario;
    for (const Selection& s : selections)
    {
        out.nodes.push_back(MakeNode(problem, s));
    }
    return out;
}

std::size_t
RequiredPoints(double target, std::size_t points)
{
    const double need = std::ceil(target * static_cast<double>(points) - 1e-9);
    return static_cast<std::size_t>(std::clamp(need, 0.0, static_cast<double>(points)));
}

PlanSolution
GreedyPlan(const PlanProblem& problem, double coverageTarget)
{
    Evaluator evaluator(problem);
    const std::vector<PlanOption> options = EnumerateOptions(problem);
    std::vector<Selection> chosen;
    std::vector<bool> siteUsed(problem.sites.size(), false);
    CoverageReport current = evaluator.Evaluate(chosen);
    const std::size_t required = RequiredPoints(coverageTarget, current.points.size());

    while (current.coveredPoints < required)
    {
        std::vector<std::size_t> open;
        std::vector<std::vector<Selection>> trials;
        for (std::size_t k = 0; k < options.size(); ++k)
        {
            if (siteUsed[options[k].selection.site])
            {
                continue;
            }
            open.push_back(k);
            trials.push_back(chosen);
            trials.back().push_back(options[k].selection);
        }
        if (open.empty())
        {
            break;
        }
        const std::vector<CoverageReport> reports = evaluator.EvaluateMany(trials);

        std::optional<std::size_t> best;
        double bestRatio = 0.0;
        for (std::size_t j = 0; j < open.size(); ++j)
        {
            if (reports[j].coveredPoints <= current.coveredPoints)
            {
                continue;
            }
            const PlanOption& o = options[open[j]];
            const double gain = static_cast<double>(reports[j].coveredPoints - current.coveredPoints);
            const double ratio = gain / o.cost;
            // Options are visited by site, class and orientation, so keeping the
            // first of equal candidates implements the remaining tie-breaks.
            bool better = !best;
            if (best)
            {
                const double tol = 1e-12 * std::max(ratio, bestRatio);
                const double bestCost = options[open[*best]].cost;
                better = ratio > bestRatio + tol || (std::abs(ratio - bestRatio) <= tol && o.cost < bestCost);
            }
            if (better)
            {
                best = j;
                bestRatio = ratio;
            }
        }
        if (!best)
        {
            break;
        }
        chosen.push_back(options[open[*best]].selection);
        siteUsed[chosen.back().site] = true;
        current = reports[*best];
    }
    return MakeSolution(problem, chosen, current, coverageTarget, evaluator.Count());
}

PlanSolution
LocalSearch(const PlanProblem& problem, const PlanSolution& initial, std::size_t maxMoves)
{
    Evaluator evaluator(problem);
    std::vector<Selection> current = initial.selections;
    SortSelections(current);
    CoverageReport report = evaluator.Evaluate(current);
    const std::size_t required = RequiredPoints(initial.coverageTarget, report.points.size());
    const std::vector<PlanOption> options = EnumerateOptions(problem);

    auto acceptable = [&](const CoverageReport& candidate) {
        if (report.coveredPoints >= required)
        {
            return candidate.coveredPoints >= required;
        }
        return candidate.coveredPoints >= report.coveredPoints;
    };

    std::size_t moves = 0;
    while (moves < maxMoves)
    {
        const double cost = TotalCost(problem, current);
        std::vector<std::vector<Selection>> neighbours;
        for (std::size_t i = 0; i < current.size(); ++i)
        {
            std::vector<Selection> drop = current;
            drop.erase(drop.begin() + static_cast<std::ptrdiff_t>(i));
            neighbours.push_back(std::move(drop));
        }
        for (std::size_t i = 0; i < current.size(); ++i)
        {
            for (const PlanOption& o : options)
            {
                if (o.selection.site == current[i].site && o.selection.cls != current[i].cls)
                {
                    std::vector<Selection> swap = current;
                    swap[i] = o.selection;
                    neighbours.push_back(std::move(swap));
                }
            }
        }
        for (std::size_t i = 0; i < current.size(); ++i)
        {
            for (const PlanOption& o : options)
            {
                const bool freeSite = std::none_of(current.begin(), current.end(), [&](const Selection& s) {
                    return s.site == o.selection.site;
                });
                if (freeSite && o.selection.cls == current[i].cls)
                {
                    std::vector<Selection> swap = current;
                    swap[i] = o.selection;
                    neighbours.push_back(std::move(swap));
                }
            }
        }

        bool moved = false;
        for (auto& n : neighbours)
        {
            // Only a strict cost reduction can be accepted, so cheaper moves are
            // the only ones worth an evaluation.
            if (!(TotalCost(problem, n) < cost - 1e-12))
            {
                continue;
            }
            CoverageReport candidate = evaluator.Evaluate(n);
            if (acceptable(candidate))
            {
                current = std::move(n);
                SortSelections(current);
                report = std::move(candidate);
                moved = true;
                ++moves;
                break;
            }
        }
        if (!moved)
        {
            break;
        }
    }
    PlanSolution out =
        MakeSolution(problem, current, report, initial.coverageTarget, initial.evaluations + evaluator.Count());
    out.movesApplied = initial.movesApplied + moves;
    return out;
}

PlanSolution
Plan(const PlanProblem& problem, double coverageTarget, std::size_t maxMoves)
{
    return LocalSearch(problem, GreedyPlan(problem, coverageTarget), maxMoves);
}

std::vector<PlanSolution>
ParetoSweep(const PlanProblem& problem, const std::vector<double>& targets, std::size_t maxMoves)
{
    if (!std::is_sorted(targets.begin(), targets.end()))
    {
        throw std::domain_error("coverage targets must be ascending");
    }
    std::vector<PlanSolution> out;
    for (double t : targets)
    {
        out.push_back(Plan(problem, t, maxMoves));
    }
    return out;
}

} // namespace smartem

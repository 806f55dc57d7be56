#ifndef SMARTEM_PLAN_H
#define SMARTEM_PLAN_H

#include "smartem/node-spec.h"
#include "smartem/scenario.h"
#include "smartem/simulate.h"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace smartem
{

/// A place where one node may be installed.
struct CandidateSite
{
    std::string id;
    Point3 position;
    std::vector<NodeClass> classes;
    /// Discrete azimuths to try, degrees. Surfaces use it as the normal, skins as the departure direction.
    std::vector<double> orientationsDeg{0.0};
};

/// Installation cost in relative units.
struct CostModel
{
    std::array<double, 5> unitCost{10.0, 5.0, 2.0, 1.0, 0.3};
    /// Extra cost per watt of power consumption.
    double powerWeightPerW = 0.0;

    double UnitCost(NodeClass cls) const
    {
        return unitCost[static_cast<std::size_t>(cls)];
    }
    /// Messages for non-positive costs or a class order that breaks gNB > IAB > repeater > RIS > skin.
    std::vector<std::string> Warnings() const;
};

/// Spec used when a class is installed at a candidate site.
struct NodeTemplates
{
    IabSpec iab;
    RepeaterSpec repeater;
    RisSpec ris;
    SkinSpec skin;
};

struct Selection
{
    std::size_t site = 0;
    NodeClass cls = NodeClass::Ris;
    double orientationDeg = 0.0;
};

struct PlanProblem
{
    Scenario scenario;
    std::vector<CandidateSite> sites;
    CostModel costs;
    NodeTemplates templates;
    std::size_t workers = 0;
};

struct PlanSolution
{
    std::vector<Selection> selections;
    double totalCost = 0.0;
    double coverageFraction = 0.0;
    std::size_t coveredPoints = 0;
    double cellEdgePowerDbm = 0.0;
    double medianCapacityBps = 0.0;
    double coverageTarget = 0.0;
    bool feasible = false;
    std::size_t evaluations = 0;
    std::size_t movesApplied = 0;
};

/// One installable option: a class at a site with a given orientation.
struct PlanOption
{
    Selection selection;
    double cost = 0.0;
};

/**
 * Every option the planner may pick, ordered by site, class and orientation.
 * Surface classes are dropped at sites without line of sight to a gNB.
 */
std::vector<PlanOption> EnumerateOptions(const PlanProblem& problem);

/// The node a selection installs.
PlacedNode MakeNode(const PlanProblem& problem, const Selection& selection);
double SelectionCost(const PlanProblem& problem, const Selection& selection);

/// Scenario with the selected nodes added after the existing ones.
Scenario BuildDeployment(const PlanProblem& problem, const std::vector<Selection>& selections);

/// Smallest covered-point count meeting `target` on `points` evaluated points.
std::size_t RequiredPoints(double target, std::size_t points);

/**
 * Adds the option with the largest covered-point gain per unit cost until the
 * target is met or nothing gains. Ties go to lower cost, then lower site index.
 */
PlanSolution GreedyPlan(const PlanProblem& problem, double coverageTarget);

/**
 * First-improvement descent over drop, class swap and site swap moves. A move
 * is taken when the cost strictly drops and the target still holds (for an
 * infeasible input: coverage does not fall).
 */
PlanSolution LocalSearch(const PlanProblem& problem, const PlanSolution& initial, std::size_t maxMoves);

/// Greedy followed by local search.
PlanSolution Plan(const PlanProblem& problem, double coverageTarget, std::size_t maxMoves = 1000);

/// One Plan() per target; targets must be ascending.
std::vector<PlanSolution> ParetoSweep(const PlanProblem& problem, const std::vector<double>& targets, std::size_t maxMoves = 1000);

} // namespace smartem

#endif // SMARTEM_PLAN_H

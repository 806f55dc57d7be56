#ifndef SMARTEM_PLAN_IO_H
#define SMARTEM_PLAN_IO_H

#include "smartem/plan.h"
#include "smartem/scenario-io.h"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace smartem
{

/// Planning inputs kept next to a scenario: candidate sites, costs and targets.
struct PlanFile
{
    std::vector<CandidateSite> sites;
    CostModel costs;
    NodeTemplates templates;
    /// Ascending; a single target for a plain plan run.
    std::vector<double> coverageTargets;
    std::size_t maxMoves = 1000;
    /// Optimum cost per target found by exhaustive enumeration, stored with test fixtures.
    std::vector<double> referenceOptimumCosts;
    std::vector<AppliedDefault> defaults;
};

PlanFile ParsePlanFile(const std::string& text);
PlanFile LoadPlanFile(const std::filesystem::path& path);

/// JSON text of one or more solutions, numbers at 9 significant digits.
std::string PlanSolutionsToJson(const PlanProblem& problem, const std::vector<PlanSolution>& solutions);

} // namespace smartem

#endif // SMARTEM_PLAN_IO_H

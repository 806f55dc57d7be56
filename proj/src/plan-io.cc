#include "smartem/plan-io.h"

#include "smartem/report-io.h"

#include "json-reader.h"

#include <algorithm>

namespace smartem
{

namespace
{

using detail::json;
using detail::ObjectReader;

CandidateSite
ReadSite(const json& v, const std::string& path, std::vector<AppliedDefault>& defaults)
{
    ObjectReader r(v, path, &defaults);
    CandidateSite s;
    s.id = r.String("id");
    s.position = detail::AsPoint3(r.Raw("position"), r.Path("position"), true);
    const json& classes = r.Raw("classes");
    if (!classes.is_array() || classes.empty())
    {
        detail::SchemaFail(r.Path("classes"), "expected a non-empty list of class names");
    }
    for (const json& c : classes)
    {
        const auto cls = c.is_string() ? NodeClassFromString(c.get<std::string>()) : std::nullopt;
        if (!cls || *cls == NodeClass::Gnb)
        {
            detail::SchemaFail(r.Path("classes"), "expected iab, repeater, ris or skin");
        }
        s.classes.push_back(*cls);
    }
    if (r.Has("orientations_deg"))
    {
        const json& o = r.Raw("orientations_deg");
        if (!o.is_array() || o.empty())
        {
            detail::SchemaFail(r.Path("orientations_deg"), "expected a non-empty list");
        }
        s.orientationsDeg.clear();
        for (const json& a : o)
        {
            s.orientationsDeg.push_back(detail::AsNumber(a, r.Path("orientations_deg")));
        }
    }
    else
    {
        defaults.push_back({r.Path("orientations_deg"), "[0]"});
    }
    r.Finish();
    return s;
}

CostModel
ReadCosts(const json& v, std::vector<AppliedDefault>& defaults)
{
    ObjectReader r(v, "costs", &defaults);
    CostModel m;
    for (NodeClass c : kAllNodeClasses)
    {
        const auto i = static_cast<std::size_t>(c);
        m.unitCost[i] = r.Number(std::string(ToString(c)), m.unitCost[i]);
    }
    m.powerWeightPerW = r.Number("power_weight_per_w", m.powerWeightPerW);
    r.Finish();
    return m;
}

NodeTemplates
ReadTemplates(const json& v, std::vector<AppliedDefault>& defaults)
{
    ObjectReader r(v, "templates", &defaults);
    NodeTemplates t;
    auto read = [&](NodeClass cls) {
        const std::string key(ToString(cls));
        const json empty = json::object();
        ObjectReader sub(r.Has(key) ? r.Raw(key) : empty, r.Path(key), &defaults);
        NodeSpec spec = detail::ReadSpec(cls, sub, true);
        sub.Finish();
        return spec;
    };
    t.iab = std::get<IabSpec>(read(NodeClass::Iab));
    // A repeater template needs its isolation, so it is only read when given.
    if (r.Has("repeater"))
    {
        t.repeater = std::get<RepeaterSpec>(read(NodeClass::Repeater));
    }
    t.ris = std::get<RisSpec>(read(NodeClass::Ris));
    t.skin = std::get<SkinSpec>(read(NodeClass::Skin));
    r.Finish();
    return t;
}

json
SelectionJson(const PlanProblem& problem, const Selection& s)
{
    const PlacedNode node = MakeNode(problem, s);
    const CandidateSite& site = problem.sites[s.site];
    return {{"site", site.id},
            {"site_index", s.site},
            {"node_id", node.id},
            {"class", std::string(ToString(s.cls))},
            {"orientation_deg", RoundSignificant(s.orientationDeg)},
            {"azimuth_deg", RoundSignificant(node.azimuthDeg)},
            {"position", {RoundSignificant(site.position.x), RoundSignificant(site.position.y), RoundSignificant(site.position.z)}},
            {"cost", RoundSignificant(SelectionCost(problem, s))}};
}

} // namespace

PlanFile
ParsePlanFile(const std::string& text)
{
    const json doc = detail::ParseDocument(text);
    PlanFile out;
    ObjectReader top(doc, "", &out.defaults);
    const json& sites = top.Raw("candidates");
    if (!sites.is_array())
    {
        detail::SchemaFail("candidates", "expected a list");
    }
    for (std::size_t i = 0; i < sites.size(); ++i)
    {
        out.sites.push_back(ReadSite(sites[i], "candidates[" + std::to_string(i) + "]", out.defaults));
    }
    out.costs = ReadCosts(top.Has("costs") ? top.Raw("costs") : json::object(), out.defaults);
    out.templates = ReadTemplates(top.Has("templates") ? top.Raw("templates") : json::object(), out.defaults);
    if (top.Has("coverage_target") == top.Has("coverage_targets"))
    {
        detail::SchemaFail("coverage_target", "give exactly one of coverage_target or coverage_targets");
    }
    if (top.Has("coverage_target"))
    {
        out.coverageTargets.push_back(top.Number("coverage_target"));
    }
    else
    {
        const json& list = top.Raw("coverage_targets");
        if (!list.is_array() || list.empty())
        {
            detail::SchemaFail("coverage_targets", "expected a non-empty list");
        }
        for (const json& t : list)
        {
            out.coverageTargets.push_back(detail::AsNumber(t, "coverage_targets"));
        }
        if (!std::is_sorted(out.coverageTargets.begin(), out.coverageTargets.end()))
        {
            detail::SchemaFail("coverage_targets", "targets must be ascending");
        }
    }
    for (double t : out.coverageTargets)
    {
        if (t < 0.0 || t > 1.0)
        {
            detail::SchemaFail("coverage_target", "targets must lie in [0, 1]");
        }
    }
    out.maxMoves = top.Count("max_moves", out.maxMoves);
    if (top.Has("reference_optimum_costs"))
    {
        const json& list = top.Raw("reference_optimum_costs");
        if (!list.is_array() || list.size() != out.coverageTargets.size())
        {
            detail::SchemaFail("reference_optimum_costs", "expected one cost per coverage target");
        }
        for (const json& c : list)
        {
            out.referenceOptimumCosts.push_back(detail::AsNumber(c, "reference_optimum_costs"));
        }
    }
    top.Finish();
    return out;
}

PlanFile
LoadPlanFile(const std::filesystem::path& path)
{
    return ParsePlanFile(ReadTextFile(path));
}

std::string
PlanSolutionsToJson(const PlanProblem& problem, const std::vector<PlanSolution>& solutions)
{
    json list = json::array();
    for (const PlanSolution& s : solutions)
    {
        json selected = json::array();
        for (const Selection& sel : s.selections)
        {
            selected.push_back(SelectionJson(problem, sel));
        }
        list.push_back({{"coverage_target", RoundSignificant(s.coverageTarget)},
                        {"feasible", s.feasible},
                        {"total_cost", RoundSignificant(s.totalCost)},
                        {"coverage_fraction", RoundSignificant(s.coverageFraction)},
                        {"covered_points", s.coveredPoints},
                        {"cell_edge_rx_power_dbm", RoundSignificant(s.cellEdgePowerDbm)},
                        {"median_capacity_bps", RoundSignificant(s.medianCapacityBps)},
                        {"evaluations", s.evaluations},
                        {"local_search_moves", s.movesApplied},
                        {"selections", selected}});
    }
    json doc;
    doc["solutions"] = list;
    return doc.dump(2) + "\n";
}

} // namespace smartem

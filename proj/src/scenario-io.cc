#include "smartem/scenario-io.h"

#include "json-reader.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace smartem
{

namespace detail
{

std::string
FormatDefault(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

json
ParseDocument(const std::string& text)
{
    try
    {
        return json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        // e.byte is the 1-based offset of the offending character.
        std::size_t line = 1;
        std::size_t column = 1;
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i)
        {
            if (text[i] == '\n')
            {
                ++line;
                column = 1;
            }
            else
            {
                ++column;
            }
        }
        std::string what = e.what();
        const auto pos = what.find("syntax error");
        if (pos != std::string::npos)
        {
            what = what.substr(pos);
        }
        throw ParseError(what, line, column);
    }
}

ObjectReader::ObjectReader(const json& object, std::string path, std::vector<AppliedDefault>* defaults)
    : m_object(object),
      m_path(std::move(path)),
      m_defaults(defaults)
{
    if (!m_object.is_object())
    {
        SchemaFail(m_path.empty() ? "document" : m_path, "expected an object");
    }
}

std::string
ObjectReader::Path(const std::string& key) const
{
    return m_path.empty() ? key : m_path + "." + key;
}

bool
ObjectReader::Has(const std::string& key) const
{
    return m_object.contains(key);
}

const json&
ObjectReader::Value(const std::string& key)
{
    if (!Has(key))
    {
        SchemaFail(Path(key), "required field is missing");
    }
    m_used.insert(key);
    return m_object.at(key);
}

const json&
ObjectReader::Raw(const std::string& key)
{
    return Value(key);
}

double
ObjectReader::Number(const std::string& key)
{
    return AsNumber(Value(key), Path(key));
}

double
ObjectReader::Number(const std::string& key, double fallback)
{
    if (!Has(key))
    {
        if (m_defaults)
        {
            m_defaults->push_back({Path(key), FormatDefault(fallback)});
        }
        return fallback;
    }
    return Number(key);
}

std::size_t
ObjectReader::Count(const std::string& key)
{
    const json& v = Value(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
    {
        SchemaFail(Path(key), "expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

std::size_t
ObjectReader::Count(const std::string& key, std::size_t fallback)
{
    if (!Has(key))
    {
        if (m_defaults)
        {
            m_defaults->push_back({Path(key), std::to_string(fallback)});
        }
        return fallback;
    }
    return Count(key);
}

std::string
ObjectReader::String(const std::string& key)
{
    const json& v = Value(key);
    if (!v.is_string())
    {
        SchemaFail(Path(key), "expected a string");
    }
    return v.get<std::string>();
}

std::string
ObjectReader::String(const std::string& key, const std::string& fallback)
{
    if (!Has(key))
    {
        if (m_defaults)
        {
            m_defaults->push_back({Path(key), fallback});
        }
        return fallback;
    }
    return String(key);
}

void
ObjectReader::Finish() const
{
    for (auto it = m_object.begin(); it != m_object.end(); ++it)
    {
        if (!m_used.count(it.key()))
        {
            SchemaFail(Path(it.key()), "unknown key");
        }
    }
}

double
AsNumber(const json& v, const std::string& path)
{
    if (!v.is_number())
    {
        SchemaFail(path, "expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d))
    {
        SchemaFail(path, "expected a finite number");
    }
    return d;
}

Point2
AsPoint2(const json& v, const std::string& path)
{
    if (!v.is_array() || v.size() != 2)
    {
        SchemaFail(path, "expected [x, y]");
    }
    return {AsNumber(v[0], path + "[0]"), AsNumber(v[1], path + "[1]")};
}

Point3
AsPoint3(const json& v, const std::string& path, bool requireZ)
{
    if (!v.is_array() || v.size() < 2 || v.size() > 3 || (requireZ && v.size() != 3))
    {
        SchemaFail(path, requireZ ? "expected [x, y, z]" : "expected [x, y] or [x, y, z]");
    }
    Point3 p{AsNumber(v[0], path + "[0]"), AsNumber(v[1], path + "[1]"), 0.0};
    if (v.size() == 3)
    {
        p.z = AsNumber(v[2], path + "[2]");
    }
    return p;
}

NodeSpec
ReadSpec(NodeClass cls, ObjectReader& r, bool template_)
{
    switch (cls)
    {
    case NodeClass::Gnb: {
        GnbSpec s;
        s.eirpDbm = r.Number("eirp_dbm", s.eirpDbm);
        s.antennaGainDbi = r.Number("antenna_gain_dbi", s.antennaGainDbi);
        s.heightM = r.Number("height_m", s.heightM);
        s.powerW = r.Number("power_w", s.powerW);
        return s;
    }
    case NodeClass::Iab: {
        IabSpec s;
        s.eirpDbm = r.Number("eirp_dbm", s.eirpDbm);
        s.antennaGainDbi = r.Number("antenna_gain_dbi", s.antennaGainDbi);
        s.heightM = r.Number("height_m", s.heightM);
        s.powerW = r.Number("power_w", s.powerW);
        if (r.Has("resource_split") && r.Raw("resource_split").is_string())
        {
            if (r.String("resource_split") != "optimal")
            {
                SchemaFail(r.Path("resource_split"), "expected a number or \"optimal\"");
            }
        }
        else if (r.Has("resource_split"))
        {
            s.resourceSplit = r.Number("resource_split");
        }
        else
        {
            r.String("resource_split", "optimal");
        }
        return s;
    }
    case NodeClass::Repeater: {
        RepeaterSpec s;
        s.e2eGainDb = r.Number("e2e_gain_db", s.e2eGainDb);
        s.maxEirpDbm = r.Number("max_eirp_dbm", s.maxEirpDbm);
        // Isolation depends on the installation and has no sensible default.
        s.isolationDb = r.Number("isolation_db");
        s.stabilityMarginDb = r.Number("stability_margin_db", s.stabilityMarginDb);
        s.powerW = r.Number("power_w", s.powerW);
        s.heightM = r.Number("height_m", s.heightM);
        s.serviceFovDeg = r.Number("service_fov_deg", s.serviceFovDeg);
        return s;
    }
    case NodeClass::Ris: {
        RisSpec s;
        s.sideM = r.Number("side_m", s.sideM);
        s.bits = static_cast<unsigned>(r.Count("bits", s.bits));
        s.elementPowerMw = r.Number("element_power_mw", s.elementPowerMw);
        s.heightM = r.Number("height_m", s.heightM);
        return s;
    }
    case NodeClass::Skin: {
        SkinSpec s;
        s.sideM = r.Number("side_m", s.sideM);
        if (!template_)
        {
            s.incidentAzimuthDeg = r.Number("incident_azimuth_deg");
            s.departureAzimuthDeg = r.Number("departure_azimuth_deg");
        }
        s.toleranceDeg = r.Number("tolerance_deg", s.toleranceDeg);
        s.heightM = r.Number("height_m", s.heightM);
        return s;
    }
    }
    SchemaFail(r.Path("class"), "unsupported class");
}

} // namespace detail

namespace
{

using detail::json;
using detail::ObjectReader;

double
SpecHeight(const NodeSpec& spec)
{
    return std::visit([](const auto& s) { return s.heightM; }, spec);
}

Building
ReadBuilding(const json& v, const std::string& path, std::vector<AppliedDefault>& defaults, std::size_t index)
{
    ObjectReader r(v, path, &defaults);
    Building b;
    b.id = r.String("id", "b" + std::to_string(index));
    const json& fp = r.Raw("footprint");
    if (!fp.is_array())
    {
        detail::SchemaFail(r.Path("footprint"), "expected a list of [x, y] vertices");
    }
    for (std::size_t i = 0; i < fp.size(); ++i)
    {
        b.footprint.push_back(detail::AsPoint2(fp[i], r.Path("footprint") + "[" + std::to_string(i) + "]"));
    }
    b.heightM = r.Number("height_m");
    b.penetrationLossDb = r.Number("penetration_loss_db", b.penetrationLossDb);
    r.Finish();
    return b;
}

PlacedNode
ReadNode(const json& v, const std::string& path, std::vector<AppliedDefault>& defaults)
{
    ObjectReader r(v, path, &defaults);
    PlacedNode n;
    n.id = r.String("id");
    const std::string name = r.String("class");
    const auto cls = NodeClassFromString(name);
    if (!cls)
    {
        detail::SchemaFail(r.Path("class"), "unknown node class \"" + name + "\"");
    }
    const json& pos = r.Raw("position");
    n.spec = detail::ReadSpec(*cls, r, false);
    n.position = detail::AsPoint3(pos, r.Path("position"), false);
    if (pos.size() == 2)
    {
        n.position.z = SpecHeight(n.spec);
        defaults.push_back({r.Path("position") + "[2]", detail::FormatDefault(n.position.z)});
    }
    n.azimuthDeg = r.Number("azimuth_deg", 0.0);
    r.Finish();
    return n;
}

UeGrid
ReadGrid(const json& v, std::vector<AppliedDefault>& defaults)
{
    ObjectReader r(v, "grid", &defaults);
    UeGrid g;
    g.origin = detail::AsPoint3(r.Raw("origin"), "grid.origin", false);
    g.nx = r.Count("nx");
    g.ny = r.Count("ny");
    g.spacingM = r.Number("spacing_m", g.spacingM);
    g.ueHeightM = r.Number("ue_height_m", g.ueHeightM);
    r.Finish();
    return g;
}

RadioParams
ReadRadio(const json& v, std::vector<AppliedDefault>& defaults)
{
    ObjectReader r(v, "radio", &defaults);
    RadioParams p;
    p.carrierFrequencyHz = r.Number("carrier_frequency_hz", p.carrierFrequencyHz);
    p.bandwidthHz = r.Number("bandwidth_hz", p.bandwidthHz);
    p.noiseFigureDb = r.Number("noise_figure_db", p.noiseFigureDb);
    p.ueAntennaGainDbi = r.Number("ue_antenna_gain_dbi", p.ueAntennaGainDbi);
    p.coverageThresholdDbm = r.Number("coverage_threshold_dbm", p.coverageThresholdDbm);
    r.Finish();
    return p;
}

} // namespace

std::string
ReadTextFile(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw ParseError("cannot open " + path.string(), 0, 0);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

LoadedScenario
ParseScenario(const std::string& text)
{
    const json doc = detail::ParseDocument(text);
    LoadedScenario out;
    ObjectReader top(doc, "", &out.defaults);

    if (top.Has("buildings"))
    {
        const json& list = top.Raw("buildings");
        if (!list.is_array())
        {
            detail::SchemaFail("buildings", "expected a list");
        }
        for (std::size_t i = 0; i < list.size(); ++i)
        {
            out.scenario.buildings.push_back(
                ReadBuilding(list[i], "buildings[" + std::to_string(i) + "]", out.defaults, i));
        }
    }
    const json& nodes = top.Raw("nodes");
    if (!nodes.is_array())
    {
        detail::SchemaFail("nodes", "expected a list");
    }
    for (std::size_t i = 0; i < nodes.size(); ++i)
    {
        out.scenario.nodes.push_back(ReadNode(nodes[i], "nodes[" + std::to_string(i) + "]", out.defaults));
    }
    out.scenario.grid = ReadGrid(top.Raw("grid"), out.defaults);
    out.scenario.radio = ReadRadio(top.Has("radio") ? top.Raw("radio") : json::object(), out.defaults);
    top.Finish();
    return out;
}

LoadedScenario
LoadScenario(const std::filesystem::path& path)
{
    return ParseScenario(ReadTextFile(path));
}

} // namespace smartem

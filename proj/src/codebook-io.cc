#include "smartem/codebook-io.h"

#include "smartem/report-io.h"

#include "json-reader.h"

namespace smartem
{

namespace
{

using detail::json;

json
PhasesArray(const PhaseCodeword& w)
{
    json phases = json::array();
    for (double p : w.phases)
    {
        phases.push_back(RoundSignificant(p));
    }
    return phases;
}

} // namespace

std::string
CodebookToJson(const Codebook& codebook)
{
    json entries = json::array();
    for (const CodebookEntry& e : codebook.entries)
    {
        entries.push_back({{"incident_rad", RoundSignificant(e.incidentRad)},
                           {"departure_rad", RoundSignificant(e.departureRad)},
                           {"phases_rad", PhasesArray(e.codeword)}});
    }
    json doc;
    doc["bits"] = codebook.bits == kContinuousPhase ? json("continuous") : json(codebook.bits);
    doc["entries"] = entries;
    return doc.dump(2) + "\n";
}

Codebook
CodebookFromJson(const std::string& text)
{
    const json doc = detail::ParseDocument(text);
    detail::ObjectReader top(doc, "", nullptr);
    Codebook book;
    const json& bits = top.Raw("bits");
    if (bits.is_string() && bits.get<std::string>() == "continuous")
    {
        book.bits = kContinuousPhase;
    }
    else
    {
        book.bits = static_cast<unsigned>(top.Count("bits"));
    }
    const json& entries = top.Raw("entries");
    if (!entries.is_array() || entries.empty())
    {
        detail::SchemaFail("entries", "expected a non-empty list");
    }
    for (std::size_t i = 0; i < entries.size(); ++i)
    {
        detail::ObjectReader r(entries[i], "entries[" + std::to_string(i) + "]", nullptr);
        CodebookEntry e;
        e.incidentRad = r.Number("incident_rad");
        e.departureRad = r.Number("departure_rad");
        const json& phases = r.Raw("phases_rad");
        if (!phases.is_array())
        {
            detail::SchemaFail(r.Path("phases_rad"), "expected a list");
        }
        for (std::size_t k = 0; k < phases.size(); ++k)
        {
            e.codeword.phases.push_back(detail::AsNumber(phases[k], r.Path("phases_rad")));
            e.codeword.bits.push_back(book.bits);
        }
        r.Finish();
        book.entries.push_back(std::move(e));
    }
    top.Finish();
    return book;
}

} // namespace smartem

#ifndef SMARTEM_JSON_READER_H
#define SMARTEM_JSON_READER_H

#include "smartem/scenario-io.h"

#include "json.hpp"

#include <set>
#include <string>
#include <vector>

namespace smartem::detail
{

using nlohmann::json;

[[noreturn]] inline void
SchemaFail(const std::string& path, const std::string& what)
{
    throw ParseError(path + ": " + what, 0, 0);
}

std::string FormatDefault(double v);

/// Parses text into a JSON document, mapping syntax errors to line and column.
json ParseDocument(const std::string& text);

/**
 * Strict reader for one JSON object: every key must be consumed before
 * Finish(), and each default it fills in is recorded.
 */
class ObjectReader
{
  public:
    ObjectReader(const json& object, std::string path, std::vector<AppliedDefault>* defaults);

    bool Has(const std::string& key) const;
    const json& Raw(const std::string& key);

    double Number(const std::string& key);
    double Number(const std::string& key, double fallback);
    std::size_t Count(const std::string& key);
    std::size_t Count(const std::string& key, std::size_t fallback);
    std::string String(const std::string& key);
    std::string String(const std::string& key, const std::string& fallback);

    std::string Path(const std::string& key) const;
    void Finish() const;

  private:
    const json& Value(const std::string& key);

    const json& m_object;
    std::string m_path;
    std::vector<AppliedDefault>* m_defaults;
    std::set<std::string> m_used;
};

double AsNumber(const json& v, const std::string& path);
Point3 AsPoint3(const json& v, const std::string& path, bool requireZ);
Point2 AsPoint2(const json& v, const std::string& path);

/// Reads a node class spec from `reader`; the reader may own other keys too.
NodeSpec ReadSpec(NodeClass cls, ObjectReader& reader, bool template_);

} // namespace smartem::detail

#endif // SMARTEM_JSON_READER_H

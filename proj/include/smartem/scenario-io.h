#ifndef SMARTEM_SCENARIO_IO_H
#define SMARTEM_SCENARIO_IO_H

#include "smartem/scenario.h"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace smartem
{

/// Malformed input. Line and column are 1-based; 0 when the error is not positional.
class ParseError : public std::runtime_error
{
  public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : std::runtime_error(message),
          m_line(line),
          m_column(column)
    {
    }

    std::size_t Line() const
    {
        return m_line;
    }

    std::size_t Column() const
    {
        return m_column;
    }

  private:
    std::size_t m_line;
    std::size_t m_column;
};

/// A field the input left out, with the value used instead.
struct AppliedDefault
{
    std::string path;
    std::string value;
};

struct LoadedScenario
{
    Scenario scenario;
    std::vector<AppliedDefault> defaults;
};

/// Parses a scenario document; unknown keys are rejected at every level.
LoadedScenario ParseScenario(const std::string& text);
LoadedScenario LoadScenario(const std::filesystem::path& path);

/// Reads a whole file; throws ParseError when it cannot be opened.
std::string ReadTextFile(const std::filesystem::path& path);

} // namespace smartem

#endif // SMARTEM_SCENARIO_IO_H

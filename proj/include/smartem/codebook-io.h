#ifndef SMARTEM_CODEBOOK_IO_H
#define SMARTEM_CODEBOOK_IO_H

#include "smartem/arrays.h"

#include <string>

namespace smartem
{

/// Codebook as JSON: angles and element phases in radians, 9 significant digits.
std::string CodebookToJson(const Codebook& codebook);

/// Inverse of CodebookToJson; throws ParseError on malformed input.
Codebook CodebookFromJson(const std::string& text);

} // namespace smartem

#endif // SMARTEM_CODEBOOK_IO_H

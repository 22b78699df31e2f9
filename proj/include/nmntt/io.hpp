#pragma once
// Coefficient file I/O: plain whitespace-separated decimal values, one
// polynomial per file. Readers are strict so a bad input fails loudly
// instead of producing a silently wrong transform.

#include <iosfwd>
#include <string>

#include "nmntt/field.hpp"

namespace nmntt {

/// Reads exactly `n` coefficients in [0, q). Throws std::runtime_error
/// naming the offending token on anything else: non-decimal tokens, values
/// out of range, too few values, or trailing data.
Polynomial read_coefficients(std::istream& in, std::uint32_t n,
                             FieldElement q);
Polynomial read_coefficients_file(const std::string& path, std::uint32_t n,
                                  FieldElement q);

/// One coefficient per line, trailing newline. Output re-reads bitwise
/// identical through read_coefficients.
void write_coefficients(std::ostream& out, const Polynomial& poly);
void write_coefficients_file(const std::string& path, const Polynomial& poly);

}  // namespace nmntt

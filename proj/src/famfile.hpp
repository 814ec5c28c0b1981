#pragma once

#include <memory>
#include <string>

#include "covering.hpp"

namespace ct {

// Parses the .fam text format (grammar documented in the README) into a
// Family. Throws CtError with ErrCode::parse for malformed documents and
// ErrCode::semantic for well-formed but inconsistent ones; messages carry
// 1-based line numbers.
std::unique_ptr<Family> family_parse(const std::string& text);

// Reads a file and parses it; the file name is prepended to error messages.
std::unique_ptr<Family> family_load(const std::string& path);

// Canonical re-print of a family in the .fam format. family_parse of the
// result reproduces an equivalent family.
std::string family_str(const Family& f);

}  // namespace ct

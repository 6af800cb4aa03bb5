#pragma once

#include <iosfwd>
#include <string>

#include "qmlab/pwl.hpp"

namespace qm::io {

/// Parses {"breakpoints": [...], "values": [...]}. Throws InputError on
/// malformed JSON or when the function invariants fail.
pwl::PiecewiseLinearFn read_function(std::istream& in);
pwl::PiecewiseLinearFn read_function_file(const std::string& path);

/// Same schema, numbers in shortest round-trip form.
std::string function_to_json(const pwl::PiecewiseLinearFn& f);
void write_function_file(const pwl::PiecewiseLinearFn& f, const std::string& path);

}  // namespace qm::io

#pragma once

// JSON curve specification: an exterior map plus the boundary path it belongs
// to. All coefficients are exact rationals written as "p/q" or decimal strings,
// so a spec survives a write/read cycle unchanged.

#include "faberlab/boundary.hpp"

#include <filesystem>
#include <string>

namespace faberlab {

class CurveSpecError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct CurveSpec
{
    std::string name;
    ExteriorMap map;
    BoundaryPath path;
    friend bool operator==(const CurveSpec&, const CurveSpec&) = default;
};

/// Parses a curve spec; unknown keys, missing keys, malformed numbers, a
/// gamma that disagrees with the map, or an invalid path are all errors.
CurveSpec parse_curve_spec(const std::string& text);
CurveSpec load_curve_spec(const std::filesystem::path& file);

/// Canonical JSON (two-space indent, trailing newline).
std::string to_json(const CurveSpec& spec);

/// "lens" or "circle".
CurveSpec builtin_curve(const std::string& name);

} // namespace faberlab

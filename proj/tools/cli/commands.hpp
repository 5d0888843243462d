#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "config.hpp"
#include "iprox/bounds.hpp"
#include "iprox/surface.hpp"

namespace iprox::cli {

/// Writes to a temporary sibling and renames it over `path`.
void write_atomic(const std::string& path, const std::string& content);

/// Trace CSV with 17 significant digits.
std::string trace_csv(const Trace& t);

/// Runs the configured algorithm; writes the trace CSV, the manifest JSON and
/// the optional plot under out_dir.
int cmd_run(const RunConfig& cfg, const std::string& out_dir, std::ostream& out, int jobs = 1);

/// Runs the verification suite and writes the JSON report. Exit code 1 when
/// any check fails.
int cmd_verify(const std::string& filter, std::uint64_t seed, int jobs, const std::string& report,
               std::ostream& out);

/// One line "sigma=... L=... gamma=..."; constants that are not given stay
/// symbolic.
std::string bounds_line(ApproxKind kind, double eps, const BoundConstants& c);
int cmd_bounds(ApproxKind kind, double eps, const BoundConstants& c, std::ostream& out);

/// surface.csv plus one SVG heatmap per algorithm.
int cmd_surface(const SurfaceSpec& spec, const std::string& out_dir, std::ostream& out);

int cmd_fixedpoint(const std::string& example_id, double eps, double gamma, std::ostream& out);

}  // namespace iprox::cli

#pragma once

// JSON and CSV forms of the library's values. Floating-point numbers are
// always written in scientific notation with 17 significant digits so that
// reports can be compared byte for byte.

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "postlie/chi_magnus.hpp"
#include "postlie/enveloping.hpp"
#include "postlie/flow.hpp"
#include "postlie/splitting.hpp"

namespace postlie {

using Json = nlohmann::ordered_json;

std::string format_double(double v);
/// Serializes with `indent` spaces per level; floats via format_double.
std::string dump_json(const Json& j, int indent = 2);
/// Throws ParseError with the parser's diagnostic.
Json parse_json(const std::string& text);
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

Json to_json(const RealMatrix& m);
Json to_json(const RationalMatrix& m);
/// Accepts numbers or "p/q" strings.
RealMatrix real_matrix_from_json(const Json& j);
/// Accepts integers or "p/q" strings; floating-point entries are converted exactly.
RationalMatrix rational_matrix_from_json(const Json& j);

/// {"dim": n, "kind": ..., "matrix": rows (custom only)}
Json to_json(const SplittingSpec& spec);
SplittingSpec spec_from_json(const Json& j);
Json to_json(const ValidationReport& report);

template <class T>
Json to_json(const GradedSeries<T>& series);

/// {"dim": d, "labels": [...], "c": [[i, j, k, "p/q"], ...], "pi_plus": rows?}
/// lists each nonzero c^k_{ij} with i < j once.
Json to_json(const StructureConstants& sc);
struct AlgebraDocument {
  StructureConstants constants;
  std::optional<RationalMatrix> pi_plus;
};
AlgebraDocument algebra_from_json(const Json& j);

/// {"spec" | "preset", "a0", "t_grid" | {"t_end", "step"}, "method", "tolerances"}
FlowProblem problem_from_json(const Json& j);
Json to_json(const FlowProblem& problem);
Json to_json(const FlowTrajectory& traj);
/// t, a_11 .. a_nn (row-major), spectral_drift, lax_defect
std::string to_csv(const FlowTrajectory& traj);

}  // namespace postlie

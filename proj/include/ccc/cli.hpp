#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccc/coframe.hpp"
#include "ccc/flatten.hpp"
#include "ccc/hypersurface.hpp"

namespace ccc::cli {

inline constexpr const char* kVersion = "0.1.0";

// Process exit codes.
enum ExitCode : int {
  kPass = 0,
  kFailure = 1,         // a check failed or a computation could not finish
  kRejected = 2,        // valid negative outcome with a witness
  kConfigError = 3,     // bad flags, schema or input files
  kInternalError = 4,   // an identity guaranteed by the theory was violated
};

using Json = nlohmann::ordered_json;

// {"n": 3, "degree": 4, "f": "x1^4+x2^4+x3^4"}; optional "variables".
Hypersurface variety_from_json(const Json& j);
Json variety_to_json(const Hypersurface& z);

// {"variables": [...], "base_point": [...], "A": [[...], ...]} or a model
// description {"model": "flat" | "rescaled" | "twisted", "n": 3, "scale": "...",
// "A": [...]}. Rational numbers are strings.
Coframe coframe_from_json(const Json& j);
Json coframe_to_json(const Coframe& omega, const std::string& model = {});

Json certificate_to_json(const FlattenCertificate& cert, const Coframe& omega);

// Runs the command line (without the program name). Reports go to `out`
// (or the --out file), diagnostics to `err`; returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ccc::cli

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "mpec/funnel.hpp"
#include "mpec/model.hpp"

namespace mpec {

/// Process exit codes of the command-line front end.
enum ExitCode : int {
    kExitSStationary = 0,
    kExitNotS = 1,          ///< not certified S-stationary, degenerate, or a failed check
    kExitMaxIterations = 2,
    kExitRestorationFailure = 3,
    kExitInputError = 4,
};

struct RunRequest {
    std::string problem;                     ///< registry name or path to a quadratic-MPEC document
    std::optional<std::string> x0;           ///< "v1,v2,..." overriding the problem's start
    std::optional<std::string> config_path;
    std::optional<std::string> trace_path;
    std::optional<std::string> result_path;
    std::optional<std::string> point;        ///< check / gradcheck evaluation point
    std::optional<std::string> multipliers_path;
    int verbosity = 1;                       ///< 0 silent, 1 summary, 2 per-iteration
};

/// Registry lookup first, then a document on disk. Throws UnknownProblem
/// when neither matches.
MpecProblem resolve_problem(const std::string &source, std::ostream &err);

int exit_code_for(SolveStatus status);

int run_solve(const RunRequest &req, std::ostream &out, std::ostream &err);
int run_check(const RunRequest &req, std::ostream &out, std::ostream &err);
int run_gradcheck(const RunRequest &req, std::ostream &out, std::ostream &err);

} // namespace mpec

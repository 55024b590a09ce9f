#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mpec/config.hpp"
#include "mpec/funnel.hpp"
#include "mpec/model.hpp"
#include "mpec/stationarity.hpp"

namespace mpec {

inline constexpr const char *kTraceHeader =
    "k,kind,theta_f,theta_c,theta,theta_max,f,alpha,u,norm_s,norm_t,gamma,qp_iters,stat_res";

/// CSV text of a trace: header line plus one row per record. Reals are
/// printed with 17 significant digits, unavailable values as "nan".
std::string format_trace(const std::vector<TraceRecord> &records);
void emit_trace(const std::vector<TraceRecord> &records, const std::string &path);

/// Inverse of format_trace. Throws ParseError with a "line:column" locus.
std::vector<TraceRecord> parse_trace(const std::string &text);
std::vector<TraceRecord> read_trace(const std::string &path);

/// JSON result document: problem, status, x, f, theta, multipliers,
/// stationarity class, iterations, wall time in seconds.
std::string format_result(const std::string &problem_name, const SolveResult &result,
                          double wall_time_s);
void write_result(const std::string &path, const std::string &problem_name,
                  const SolveResult &result, double wall_time_s);

/// JSON object whose keys are SolverConfig field names; absent keys keep
/// their defaults. Unknown keys, wrong types and out-of-range values throw
/// ConfigError.
SolverConfig parse_config(const std::string &document);
SolverConfig load_config_file(const std::string &path);

/// JSON object with optional arrays "lambda", "mu", "nu_hat", "xi_hat"
/// (missing arrays are zero). Lengths must match the problem sizes.
MpecMultipliers parse_multipliers(const std::string &document, const MpecProblem &problem);
MpecMultipliers load_multipliers_file(const std::string &path, const MpecProblem &problem);

/// "v1,v2,..." to a vector; throws ParseError on anything else.
Vector parse_vector(const std::string &text);

/// Whole file contents; throws Error when the file cannot be read.
std::string read_text_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &text);

} // namespace mpec

#include <iostream>

#include <CLI11.hpp>

#include "mpec/cli.hpp"

int main(int argc, char **argv) {
    CLI::App app{"Funnel SQP solver for MPECs"};
    app.require_subcommand(1);

    mpec::RunRequest req;
    bool quiet = false, verbose = false;

    auto *solve = app.add_subcommand("solve", "Solve an MPEC from a starting point");
    solve->add_option("--problem", req.problem, "Built-in name or path to a problem document")->required();
    solve->add_option("--x0", req.x0, "Starting point v1,v2,...");
    solve->add_option("--config", req.config_path, "Solver configuration (JSON)");
    solve->add_option("--trace", req.trace_path, "Write the iteration trace (CSV)");
    solve->add_option("--result", req.result_path, "Write the result document (JSON)");
    solve->add_flag("-q,--quiet", quiet, "Print nothing on success");
    solve->add_flag("-v,--verbose", verbose, "Print one line per iteration");

    auto *check = app.add_subcommand("check", "Check gradients, stationarity and MPEC-MFCQ at a point");
    check->add_option("--problem", req.problem, "Built-in name or path to a problem document")->required();
    check->add_option("--point", req.point, "Point v1,v2,...")->required();
    check->add_option("--multipliers", req.multipliers_path, "Multiplier file (JSON)");

    auto *grad = app.add_subcommand("gradcheck", "Compare analytic derivatives with central differences");
    grad->add_option("--problem", req.problem, "Built-in name or path to a problem document")->required();
    grad->add_option("--point", req.point, "Point v1,v2,...")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return mpec::kExitInputError;
    }

    req.verbosity = quiet ? 0 : verbose ? 2 : 1;
    if (*solve)
        return mpec::run_solve(req, std::cout, std::cerr);
    if (*check)
        return mpec::run_check(req, std::cout, std::cerr);
    return mpec::run_gradcheck(req, std::cout, std::cerr);
}

#include "mpec/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <ostream>

#include "mpec/errors.hpp"
#include "mpec/io.hpp"
#include "mpec/quadratic_format.hpp"
#include "mpec/registry.hpp"
#include "mpec/stationarity.hpp"

namespace mpec {

namespace {

std::string fmt_vector(const Vector &v) {
    std::string s = "[";
    char buf[32];
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.10g", v[i]);
        s += (i ? ", " : "") + std::string(buf);
    }
    return s + "]";
}

Vector point_for(const MpecProblem &problem, const std::string &text, const char *what) {
    Vector x = parse_vector(text);
    if (x.size() != problem.n)
        throw DimensionMismatch(std::string(what) + " has " + std::to_string(x.size()) +
                                " entries, problem has n = " + std::to_string(problem.n));
    return x;
}

void print_gradient_report(std::ostream &out, const GradientReport &g) {
    out << "gradients: " << (g.pass ? "pass" : "FAIL") << " (worst relative error " << g.worst()
        << ", f " << g.err_f << ", g " << g.err_g << ", h " << g.err_h << ", G " << g.err_G << ", H "
        << g.err_H << ", tolerance " << g.tolerance << ")\n";
}

// Input problems map to exit code 4; anything else propagates.
template <class Fn>
int guarded(std::ostream &err, Fn &&fn) {
    try {
        return fn();
    } catch (const NumericalBreakdown &e) {
        err << "error: " << e.what() << "\n";
        return kExitNotS;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

} // namespace

MpecProblem resolve_problem(const std::string &source, std::ostream &err) {
    const std::vector<std::string> names = registry_names();
    if (std::find(names.begin(), names.end(), source) != names.end())
        return registry_get(source);
    if (std::filesystem::is_regular_file(source)) {
        bool symmetrized = false;
        MpecProblem p = load_quadratic_mpec_file(source, &symmetrized);
        if (symmetrized)
            err << "warning: objective matrix P was not symmetric and was replaced by (P+P')/2\n";
        return p;
    }
    throw UnknownProblem("unknown problem '" + source + "' (not a built-in name or a readable file)");
}

int exit_code_for(SolveStatus status) {
    switch (status) {
    case SolveStatus::SStationaryPoint: return kExitSStationary;
    case SolveStatus::MaxIterations: return kExitMaxIterations;
    case SolveStatus::RestorationFailure: return kExitRestorationFailure;
    case SolveStatus::Degenerate:
    case SolveStatus::NotCertified: return kExitNotS;
    }
    return kExitNotS;
}

int run_solve(const RunRequest &req, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        const MpecProblem problem = resolve_problem(req.problem, err);
        const SolverConfig cfg = req.config_path ? load_config_file(*req.config_path) : SolverConfig{};
        cfg.validate();
        Vector x0;
        if (req.x0)
            x0 = point_for(problem, *req.x0, "--x0");
        else if (problem.x0)
            x0 = *problem.x0;
        else
            throw Error("problem " + problem.name + " has no starting point; pass --x0");

        SolveObserver observer;
        if (req.verbosity >= 2)
            observer = [&out](const IterationEvent &ev) {
                out << "k=" << ev.k << " " << to_string(ev.kind) << " theta=" << ev.theta
                    << " theta_max=" << ev.theta_max << " alpha=" << ev.alpha << "\n";
            };

        const auto t0 = std::chrono::steady_clock::now();
        const SolveResult res = solve(problem, x0, cfg, observer);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        if (req.trace_path)
            emit_trace(res.trace, *req.trace_path);
        if (req.result_path)
            write_result(*req.result_path, problem.name, res, wall);
        if (req.verbosity >= 1) {
            out << "problem: " << problem.name << "\n"
                << "status: " << to_string(res.status) << "\n"
                << "iterations: " << res.iterations << "\n"
                << "x: " << fmt_vector(res.x_final) << "\n"
                << "f: " << res.f_final << "\n"
                << "theta: " << res.theta_final.theta << "\n"
                << "class: " << to_string(res.stationarity.kind) << "\n";
            if (!res.stationarity.reason.empty())
                out << "reason: " << res.stationarity.reason << "\n";
        }
        return exit_code_for(res.status);
    });
}

int run_check(const RunRequest &req, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        const MpecProblem problem = resolve_problem(req.problem, err);
        if (!req.point)
            throw Error("check requires --point");
        const Vector x = point_for(problem, *req.point, "--point");
        const Evaluation e = evaluate(problem, x);
        const MpecMultipliers mult = req.multipliers_path
                                         ? load_multipliers_file(*req.multipliers_path, problem)
                                         : estimate_multipliers(e);

        const GradientReport g = check_gradients(problem, x);
        const StationarityClass cls = classify(e, mult);
        const MfcqReport mfcq = mfcq_diagnostic(e);

        print_gradient_report(out, g);
        out << "class: " << to_string(cls.kind) << " (kkt residual " << cls.kkt_residual << ", theta "
            << cls.theta << ")\n";
        if (!cls.reason.empty())
            out << "reason: " << cls.reason << "\n";
        for (const BiactivePair &p : cls.biactive_pairs)
            out << "biactive " << p.index << ": nu_hat " << p.nu_hat << ", xi_hat " << p.xi_hat << "\n";
        out << "nu_hat: " << fmt_vector(mult.nu_hat) << "\n"
            << "xi_hat: " << fmt_vector(mult.xi_hat) << "\n";
        out << "mfcq: " << (mfcq.holds ? "holds" : "fails") << " (rank " << (mfcq.rank_ok ? "ok" : "deficient")
            << ", " << mfcq.equality_rows << " equality rows, " << mfcq.strict_rows << " strict rows, tau "
            << mfcq.tau << ")\n";

        const bool ok = g.pass && cls.kind == StationarityKind::SStationary && mfcq.holds;
        return ok ? kExitSStationary : kExitNotS;
    });
}

int run_gradcheck(const RunRequest &req, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        const MpecProblem problem = resolve_problem(req.problem, err);
        if (!req.point)
            throw Error("gradcheck requires --point");
        const Vector x = point_for(problem, *req.point, "--point");
        const GradientReport g = check_gradients(problem, x);
        print_gradient_report(out, g);
        return g.pass ? kExitSStationary : kExitNotS;
    });
}

} // namespace mpec

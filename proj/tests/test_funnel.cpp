#include <doctest.h>

#include <cmath>
#include <random>

#include "mpec/errors.hpp"
#include "mpec/funnel.hpp"
#include "mpec/io.hpp"
#include "mpec/quadratic_format.hpp"
#include "mpec/registry.hpp"
#include "oracles.hpp"

using namespace mpec;
using mpec::testing::vec;

namespace {

FunnelState state_at(const MpecProblem &p, const Vector &x, double theta_max) {
    FunnelState st;
    st.x = x;
    st.eval = evaluate(p, x);
    st.theta = infeasibility(st.eval);
    st.theta_max = theta_max;
    st.B = Matrix::Identity(p.n, p.n);
    return st;
}

// f = x1^2 with G = x2, H = 1: theta stays 0 on the line x2 = 0.
MpecProblem square_problem() {
    return load_quadratic_mpec(R"({"n": 2, "objective": {"P": [[2,0],[0,0]], "c": [0,0]},
        "G": {"A": [[0,1]], "b": [0]}, "H": {"A": [[0,0]], "b": [1]}})");
}

// f = x1 with -0.6 <= x1 <= 2.
MpecProblem box_problem() {
    return load_quadratic_mpec(R"({"n": 2, "objective": {"P": [[0,0],[0,0]], "c": [1,0]},
        "g": {"A": [[1,0],[-1,0]], "b": [0.6, 2]},
        "G": {"A": [[0,1]], "b": [0]}, "H": {"A": [[0,0]], "b": [1]}})");
}

// G = x1, H = 1: theta = |x1| for x1 >= 0.
MpecProblem abs_problem() {
    return load_quadratic_mpec(R"({"n": 2, "objective": {"P": [[0,0],[0,0]], "c": [0,0]},
        "G": {"A": [[1,0]], "b": [0]}, "H": {"A": [[0,0]], "b": [1]}})");
}

struct RunLog {
    std::vector<IterationEvent> events;
    std::vector<StepOutcome> outcomes;
    std::vector<bool> has_outcome;
};

SolveResult logged_solve(const MpecProblem &p, const Vector &x0, const SolverConfig &cfg, RunLog &log) {
    return solve(p, x0, cfg, [&](const IterationEvent &ev) {
        log.events.push_back(ev);
        log.has_outcome.push_back(ev.outcome != nullptr);
        log.outcomes.push_back(ev.outcome ? *ev.outcome : StepOutcome{});
    });
}

} // namespace

TEST_CASE("alpha_min") {
    SolverConfig cfg;
    CHECK(alpha_min(0.2, cfg) == doctest::Approx(0.004));
    CHECK(alpha_min(0.0, cfg) == 0.0);
    CHECK(alpha_min(10.0, cfg) == 0.1);
}

TEST_CASE("f line search") {
    SolverConfig cfg;
    const MpecProblem sq = square_problem();
    const LineSearchResult a = f_line_search(sq, state_at(sq, vec({1, 0}), 1.0), vec({-1, 0}), cfg);
    CHECK(a.accepted);
    CHECK(a.alpha == 1.0);
    CHECK(a.values.f == 0.0);

    // alpha = 1 lands at x1 = -1 with theta 0.4 > theta_max; alpha = 1/2 is feasible.
    const MpecProblem box = box_problem();
    const FunnelState st = state_at(box, vec({1, 0}), 0.1);
    REQUIRE(st.theta.theta == 0.0);
    const LineSearchResult b = f_line_search(box, st, vec({-2, 0}), cfg);
    REQUIRE(b.accepted);
    CHECK(b.alpha == 0.5);
    CHECK(b.trials == 2);
    CHECK(st.eval.f - b.values.f >= -b.alpha * cfg.rho * st.eval.grad_f.dot(vec({-2, 0})));
    CHECK(infeasibility(evaluate_values(box, vec({-1, 0}))).theta == doctest::Approx(0.4));

    const LineSearchResult z = f_line_search(sq, state_at(sq, vec({1, 0}), 1.0), vec({0, 0}), cfg);
    CHECK_FALSE(z.accepted);
}

TEST_CASE("h line search") {
    SolverConfig cfg;
    const MpecProblem ab = abs_problem();
    const FunnelState st = state_at(ab, vec({1, 0}), 10.0);
    REQUIRE(st.theta.theta == doctest::Approx(1.0));
    const LineSearchResult a = h_line_search(ab, st, vec({-1, 0}), cfg);
    CHECK(a.accepted);
    CHECK(a.alpha == 1.0);
    CHECK(a.theta.theta == 0.0);

    const LineSearchResult up = h_line_search(ab, st, vec({1, 0}), cfg);
    CHECK_FALSE(up.accepted);
    CHECK(up.trials <= cfg.max_backtracks + 1);

    const MpecProblem lin = registry_get("lin_biactive");
    const FunnelState sl = state_at(lin, vec({1, 1}), 10.0);
    const Vector d = vec({-0.5, -0.5});
    const LineSearchResult c = h_line_search(lin, sl, d, cfg);
    REQUIRE(c.accepted);
    CHECK(c.theta.theta <= (1.0 - c.alpha * cfg.rho) * sl.theta.theta);
}

TEST_CASE("theta_max update") {
    SolverConfig cfg;
    CHECK(update_theta_max(StepKind::F, 0.5, 0.3, 1.0, cfg) == 1.0);
    CHECK(update_theta_max(StepKind::Restoration, 0.5, 0.3, 1.0, cfg) == 0.5);
    CHECK(update_theta_max(StepKind::H, 0.5, 0.3, 1.0, cfg) == doctest::Approx(0.9));
    CHECK(update_theta_max(StepKind::H, 2.0, 1.0, 1.6, cfg) == doctest::Approx(1.5));
}

TEST_CASE("B update") {
    const MpecProblem sq = square_problem();
    FunnelState st = state_at(sq, vec({0.3, -0.2}), 1.0);
    SolverConfig id;
    id.hessian = HessianMode::Identity;
    st.B = 3.0 * Matrix::Identity(2, 2);
    CHECK(update_B(st, vec({1, 1}), vec({5, 5}), id) == Matrix::Identity(2, 2));

    // Gradient of 1/2 ||x||^2 is x, so y = s and B = I is already exact.
    SolverConfig bfgs;
    bfgs.hessian = HessianMode::DampedBFGS;
    st.B = Matrix::Identity(2, 2);
    st.eval.grad_f = st.x;
    const Vector xn = vec({-0.4, 0.9});
    CHECK(update_B(st, xn, xn, bfgs).isApprox(Matrix::Identity(2, 2), 1e-14));

    st.B << 2, 0.3, 0.3, 1;
    CHECK(update_B(st, xn, st.eval.grad_f, bfgs) == st.B);

    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (int k = 0; k < 200; ++k) {
        FunnelState r = state_at(sq, vec({U(rng), U(rng)}), 1.0);
        r.B = Matrix::Identity(2, 2);
        for (int j = 0; j < 5; ++j) {
            const Vector x_next = r.x + vec({U(rng), U(rng)});
            const Vector g_next = vec({U(rng), U(rng)});
            r.B = update_B(r, x_next, g_next, bfgs);
            r.x = x_next;
            r.eval.grad_f = g_next;
            Eigen::SelfAdjointEigenSolver<Matrix> eig(r.B);
            CHECK(eig.eigenvalues().minCoeff() >= 1e-6 * (1.0 - 1e-9));
            CHECK((r.B - r.B.transpose()).norm() <= 1e-12 * r.B.norm());
        }
    }
}

TEST_CASE("solve lin_biactive from (1,1)") {
    const SolveResult r = solve(registry_get("lin_biactive"), vec({1, 1}));
    CHECK(r.status == SolveStatus::SStationaryPoint);
    CHECK(r.x_final.norm() <= 1e-6);
    CHECK(r.multipliers.nu_hat[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.multipliers.xi_hat[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.stationarity.kind == StationarityKind::SStationary);
    REQUIRE_FALSE(r.trace.empty());
    CHECK(r.trace.back().kind == StepKind::Terminal);
}

TEST_CASE("solve quad_branch from (2,0.1)") {
    const SolveResult r = solve(registry_get("quad_branch"), vec({2, 0.1}));
    CHECK(r.status == SolveStatus::SStationaryPoint);
    CHECK(r.f_final == doctest::Approx(1.0).epsilon(1e-6));
    CHECK((r.x_final - vec({1, 0})).norm() <= 1e-6);
}

TEST_CASE("stationary start terminates immediately") {
    const SolveResult r = solve(registry_get("lin_biactive"), vec({0, 0}));
    CHECK(r.status == SolveStatus::SStationaryPoint);
    CHECK(r.iterations <= 1);
    CHECK(r.theta_final.theta + r.trace.back().norm_t <= SolverConfig{}.epsilon);
}

TEST_CASE("infeasible complementarity ends in restoration failure") {
    const SolveResult r = solve(registry_get("infeasible_cc"), *registry_get("infeasible_cc").x0);
    CHECK(r.status == SolveStatus::RestorationFailure);
    CHECK(r.trace.back().kind == StepKind::Restoration);
}

TEST_CASE("funnel invariants along runs") {
    std::mt19937_64 rng(62);
    std::uniform_real_distribution<double> U(-1.0, 2.0);
    for (HessianMode mode : {HessianMode::Identity, HessianMode::DampedBFGS}) {
        SolverConfig cfg;
        cfg.hessian = mode;
        for (const char *name : {"lin_biactive", "quad_branch", "mixed_eq", "cstat_fixture", "nl_quad_branch"}) {
            const MpecProblem p = registry_get(name);
            for (int run = 0; run < 6; ++run) {
                Vector x0(p.n);
                for (int i = 0; i < p.n; ++i)
                    x0[i] = U(rng);
                CAPTURE(name);
                CAPTURE(x0.transpose());
                RunLog log;
                const SolveResult r = logged_solve(p, x0, cfg, log);

                double prev_max = std::numeric_limits<double>::infinity();
                for (std::size_t j = 0; j < r.trace.size(); ++j) {
                    const TraceRecord &t = r.trace[j];
                    CHECK(t.k == static_cast<int>(j));
                    CHECK(t.theta <= t.theta_max);
                    CHECK(t.theta_max <= prev_max);
                    prev_max = t.theta_max;
                }
                for (std::size_t j = 0; j < log.events.size(); ++j) {
                    const IterationEvent &ev = log.events[j];
                    const TraceRecord &t = r.trace[ev.k];
                    CHECK(t.kind == ev.kind);
                    CHECK(ev.theta_max_next <= ev.theta_max);
                    if (ev.kind == StepKind::F) {
                        CHECK(ev.theta_max_next == ev.theta_max);
                        const PointValues a = evaluate_values(p, ev.x), b = evaluate_values(p, ev.x_next);
                        const double slope = evaluate(p, ev.x).grad_f.dot(ev.d);
                        CHECK(a.f - b.f >= -ev.alpha * cfg.rho * slope - 1e-12 * std::max(1.0, std::abs(a.f)));
                        CHECK(infeasibility(b).theta <= ev.theta_max + 1e-12);
                    } else if (ev.kind == StepKind::H) {
                        const double th = infeasibility(evaluate_values(p, ev.x_next)).theta;
                        CHECK(th <= (1.0 - ev.alpha * cfg.rho) * ev.theta + 1e-12 * std::max(1.0, ev.theta));
                    } else {
                        CHECK(ev.theta_max_next == doctest::Approx(cfg.kappa7 * ev.theta_max));
                    }
                    if (log.has_outcome[j] && log.outcomes[j].scaled) {
                        const StepOutcome &o = log.outcomes[j];
                        const double v = std::abs(evaluate(p, ev.x).grad_Q.dot(o.gamma * o.t_raw));
                        CHECK(std::abs(v - o.delta) <= 1e-12 * o.delta);
                    }
                }
                if (r.status == SolveStatus::SStationaryPoint)
                    CHECK(r.stationarity.kind == StationarityKind::SStationary);
            }
        }
    }
}

TEST_CASE("solve is deterministic") {
    const MpecProblem p = registry_get("nl_quad_branch");
    const Vector x0 = vec({1.7, 0.4});
    const SolveResult a = solve(p, x0), b = solve(p, x0);
    CHECK(format_trace(a.trace) == format_trace(b.trace));
    CHECK(a.x_final == b.x_final);
}

TEST_CASE("solve rejects invalid input") {
    SolverConfig cfg;
    cfg.rho = 0.9;
    CHECK_THROWS_AS(solve(registry_get("quad_branch"), vec({1, 1}), cfg), ConfigError);
    CHECK_THROWS_AS(solve(registry_get("quad_branch"), vec({1, 1, 1})), DimensionMismatch);

    SolverConfig ok;
    for (auto bad : {+[](SolverConfig &c) { c.kappa7 = 1.0; }, +[](SolverConfig &c) { c.sigma3 = 1.0; },
                     +[](SolverConfig &c) { c.kappa1 = 0.25; }, +[](SolverConfig &c) { c.u_hat = 0.0; },
                     +[](SolverConfig &c) { c.sigma2 = 2.5; }, +[](SolverConfig &c) { c.max_iter = 0; },
                     +[](SolverConfig &c) { c.epsilon = -1.0; }, +[](SolverConfig &c) { c.kappa9 = 0.0; }}) {
        SolverConfig c = ok;
        bad(c);
        CHECK_THROWS_AS(c.validate(), ConfigError);
    }
    CHECK_NOTHROW(ok.validate());
}

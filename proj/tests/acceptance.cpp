// One line per acceptance criterion; exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mpec/funnel.hpp"
#include "mpec/io.hpp"
#include "mpec/registry.hpp"
#include "mpec/restoration.hpp"
#include "mpec/stationarity.hpp"
#include "mpec/steps.hpp"
#include "oracles.hpp"

using namespace mpec;
using mpec::testing::vec;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
    bool pass = true;
    std::string detail;

    void fail(const std::string &why) {
        if (pass)
            detail = why;
        pass = false;
    }
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string point(const Vector &x) {
    std::string s = "(";
    for (Eigen::Index i = 0; i < x.size(); ++i)
        s += (i ? "," : "") + num(x[i]);
    return s + ")";
}

struct Run {
    std::string problem;
    Vector x0;
    SolveResult result;
    std::vector<IterationEvent> events;
    std::vector<std::optional<StepOutcome>> outcomes;
    double seconds = 0.0;
};

Run run(const std::string &name, const Vector &x0, const SolverConfig &cfg = {}) {
    Run r;
    r.problem = name;
    r.x0 = x0;
    const MpecProblem p = registry_get(name);
    const auto t0 = Clock::now();
    r.result = solve(p, x0, cfg, [&](const IterationEvent &ev) {
        r.events.push_back(ev);
        r.outcomes.push_back(ev.outcome ? std::optional<StepOutcome>(*ev.outcome) : std::nullopt);
    });
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
}

Vector uniform_point(std::mt19937_64 &rng, int n, double lo, double hi) {
    std::uniform_real_distribution<double> U(lo, hi);
    Vector x(n);
    for (int i = 0; i < n; ++i)
        x[i] = U(rng);
    return x;
}

testing::QuadraticFixture pair_fixture(const Matrix &P, const Vector &c, double f0) {
    testing::QuadraticFixture fx;
    fx.P = P;
    fx.c = c;
    fx.f0 = f0;
    fx.A_g.resize(0, 2);
    fx.b_g.resize(0);
    fx.A_h.resize(0, 2);
    fx.b_h.resize(0);
    fx.A_G = Matrix(1, 2);
    fx.A_G << 1, 0;
    fx.b_G = Vector::Zero(1);
    fx.A_H = Matrix(1, 2);
    fx.A_H << 0, 1;
    fx.b_H = Vector::Zero(1);
    return fx;
}

std::vector<Run> g_runs;

Verdict criterion1() {
    Verdict v;
    std::mt19937_64 rng(1001);

    const auto lin_oracle = testing::branch_enumeration(pair_fixture(Matrix::Zero(2, 2), vec({1, 1}), 0.0));
    const auto quad_oracle =
        testing::branch_enumeration(pair_fixture(2.0 * Matrix::Identity(2, 2), vec({-2, -2}), 2.0));
    testing::QuadraticFixture mixed = pair_fixture(2.0 * Matrix::Identity(2, 2), vec({-4, -2}), 5.0);
    mixed.A_h = Matrix(1, 2);
    mixed.A_h << 1, 1;
    mixed.b_h = vec({-1});
    const auto mixed_oracle = testing::branch_enumeration(mixed);
    if (!lin_oracle || !quad_oracle || !mixed_oracle) {
        v.fail("branch oracle found no feasible branch");
        return v;
    }

    std::vector<Vector> lin_starts = {vec({1, 1})};
    for (int i = 0; i < 10; ++i)
        lin_starts.push_back(uniform_point(rng, 2, 0.0, 2.0));
    for (const Vector &x0 : lin_starts) {
        Run r = run("lin_biactive", x0);
        const SolveResult &s = r.result;
        const std::string at = "lin_biactive from " + point(x0) + ": ";
        if (s.status != SolveStatus::SStationaryPoint)
            v.fail(at + "status " + to_string(s.status));
        else if ((s.x_final - lin_oracle->x).norm() > 1e-6)
            v.fail(at + "x = " + point(s.x_final));
        else if (std::abs(s.multipliers.nu_hat[0] - 1.0) > 1e-4 || std::abs(s.multipliers.xi_hat[0] - 1.0) > 1e-4)
            v.fail(at + "multipliers " + num(s.multipliers.nu_hat[0]) + ", " + num(s.multipliers.xi_hat[0]));
        else if (s.iterations > 100)
            v.fail(at + std::to_string(s.iterations) + " iterations");
        else if (r.seconds >= 1.0)
            v.fail(at + num(r.seconds) + " s");
        g_runs.push_back(std::move(r));
    }

    // Every branch optimum with the oracle value is an accepted limit.
    const MpecProblem quad = registry_get("quad_branch");
    std::vector<Vector> quad_targets;
    for (const Vector &m : quad.solution.minimizers)
        if (std::abs(quad.f(m) - quad_oracle->f) <= 1e-12)
            quad_targets.push_back(m);
    for (int i = 0; i < 10; ++i) {
        const Vector x0 = uniform_point(rng, 2, -0.5, 2.5);
        Run r = run("quad_branch", x0);
        const SolveResult &s = r.result;
        const std::string at = "quad_branch from " + point(x0) + ": ";
        double dist = std::numeric_limits<double>::infinity();
        for (const Vector &m : quad_targets)
            dist = std::min(dist, (s.x_final - m).norm());
        if (std::abs(s.f_final - quad_oracle->f) > 1e-6)
            v.fail(at + "f = " + num(s.f_final));
        else if (dist > 1e-6)
            v.fail(at + "x = " + point(s.x_final));
        else if (s.stationarity.kind != StationarityKind::SStationary)
            v.fail(at + "class " + to_string(s.stationarity.kind));
        g_runs.push_back(std::move(r));
    }

    {
        const MpecProblem p = registry_get("mixed_eq");
        Run r = run("mixed_eq", *p.x0);
        const SolveResult &s = r.result;
        if ((s.x_final - mixed_oracle->x).norm() > 1e-6)
            v.fail("mixed_eq: x = " + point(s.x_final));
        else if (std::abs(s.f_final - mixed_oracle->f) > 1e-6)
            v.fail("mixed_eq: f = " + num(s.f_final));
        else if (s.status != SolveStatus::SStationaryPoint)
            v.fail("mixed_eq: status " + std::string(to_string(s.status)));
        g_runs.push_back(std::move(r));
    }
    if (v.pass)
        v.detail = std::to_string(g_runs.size()) + " runs, oracle f* = " + num(lin_oracle->f) + ", " +
                   num(quad_oracle->f) + ", " + num(mixed_oracle->f);
    return v;
}

// Unique weak multipliers from grad f = nu_hat grad G + xi_hat grad H.
MpecMultipliers pair_kkt(const Evaluation &e) {
    Matrix A(2, 2);
    A.col(0) = e.jac_G.col(0);
    A.col(1) = e.jac_H.col(0);
    const Vector w = A.fullPivLu().solve(e.grad_f);
    MpecMultipliers m;
    m.lambda.resize(0);
    m.mu.resize(0);
    m.nu = m.nu_hat = vec({w[0]});
    m.xi = m.xi_hat = vec({w[1]});
    return m;
}

Verdict criterion2() {
    Verdict v;
    const Evaluation q = evaluate(registry_get("quad_branch"), vec({0, 0}));
    const MpecMultipliers mq = pair_kkt(q);
    if (std::abs(mq.nu_hat[0] + 2.0) > 1e-14 || std::abs(mq.xi_hat[0] + 2.0) > 1e-14)
        v.fail("quad_branch multipliers " + num(mq.nu_hat[0]) + ", " + num(mq.xi_hat[0]));
    const StationarityClass cq = classify(q, mq);
    if (cq.kind != StationarityKind::CStationary || cq.m || cq.s)
        v.fail("quad_branch (0,0) classified " + std::string(to_string(cq.kind)));

    const Evaluation l = evaluate(registry_get("lin_biactive"), vec({0, 0}));
    const StationarityClass cl = classify(l, pair_kkt(l));
    if (cl.kind != StationarityKind::SStationary)
        v.fail("lin_biactive (0,0) classified " + std::string(to_string(cl.kind)));
    if (v.pass)
        v.detail = "quad_branch (0,0) CStationary, lin_biactive (0,0) SStationary";
    return v;
}

Verdict criterion3(const SolverConfig &cfg) {
    Verdict v;
    int f_steps = 0, h_steps = 0, records = 0;
    for (const Run &r : g_runs) {
        const MpecProblem p = registry_get(r.problem);
        const std::string at = r.problem + " from " + point(r.x0) + ": ";
        double prev = std::numeric_limits<double>::infinity();
        for (const TraceRecord &t : r.result.trace) {
            ++records;
            if (t.theta > t.theta_max)
                v.fail(at + "theta > theta_max at k = " + std::to_string(t.k));
            if (t.theta_max > prev)
                v.fail(at + "theta_max increased at k = " + std::to_string(t.k));
            prev = t.theta_max;
        }
        for (const IterationEvent &ev : r.events) {
            const PointValues a = evaluate_values(p, ev.x), b = evaluate_values(p, ev.x_next);
            const double th_next = infeasibility(b).theta;
            const TraceRecord &t = r.result.trace.at(ev.k);
            if (t.kind != ev.kind || (ev.kind != StepKind::Restoration && t.alpha != ev.alpha))
                v.fail(at + "trace disagrees with step " + std::to_string(ev.k));
            if (ev.kind == StepKind::F) {
                ++f_steps;
                const double slope = evaluate(p, ev.x).grad_f.dot(ev.d);
                const double tol = 1e-12 * std::max(1.0, std::abs(a.f));
                if (a.f - b.f < -ev.alpha * cfg.rho * slope - tol)
                    v.fail(at + "Armijo decrease fails at k = " + std::to_string(ev.k));
                if (th_next > ev.theta_max + 1e-12 * std::max(1.0, ev.theta_max))
                    v.fail(at + "F-step leaves the funnel at k = " + std::to_string(ev.k));
                if (ev.theta_max_next != ev.theta_max)
                    v.fail(at + "F-step changed theta_max at k = " + std::to_string(ev.k));
            } else if (ev.kind == StepKind::H) {
                ++h_steps;
                if (th_next > (1.0 - ev.alpha * cfg.rho) * ev.theta + 1e-12 * std::max(1.0, ev.theta))
                    v.fail(at + "infeasibility decrease fails at k = " + std::to_string(ev.k));
            }
        }
    }
    if (v.pass)
        v.detail = std::to_string(records) + " records, " + std::to_string(f_steps) + " F-steps, " +
                   std::to_string(h_steps) + " H-steps";
    return v;
}

Verdict criterion4() {
    Verdict v;
    std::mt19937_64 rng(1004);
    int tested = 0;
    double worst = 0.0;
    for (const std::string &name : registry_names()) {
        const MpecProblem p = registry_get(name);
        int done = 0;
        for (int draw = 0; done < 100 && draw < 10000; ++draw) {
            const Evaluation e = evaluate(p, uniform_point(rng, p.n, -2.0, 2.0));
            if (e.grad_Q.norm() <= 1e-8)
                continue;
            ++done;
            const double rel = std::abs(e.Q + e.grad_Q.dot(complementarity_step(e).s)) / std::max(1.0, std::abs(e.Q));
            worst = std::max(worst, rel);
            if (rel > 1e-10)
                v.fail(name + ": relative residual " + num(rel));
        }
        if (done < 100)
            v.fail(name + ": only " + std::to_string(done) + " points with nonzero grad Q");
        tested += done;
    }
    if (v.pass)
        v.detail = std::to_string(tested) + " points, worst relative residual " + num(worst);
    return v;
}

Verdict criterion5() {
    Verdict v;
    std::vector<Run> extra;
    std::mt19937_64 rng(1005);
    for (HessianMode mode : {HessianMode::Identity, HessianMode::DampedBFGS}) {
        SolverConfig cfg;
        cfg.hessian = mode;
        for (const char *name : {"lin_biactive", "quad_branch", "mixed_eq", "cstat_fixture", "nl_quad_branch"}) {
            const MpecProblem p = registry_get(name);
            for (int i = 0; i < 10; ++i)
                extra.push_back(run(name, uniform_point(rng, p.n, -1.0, 3.0), cfg));
        }
    }
    int fired = 0;
    double worst = 0.0;
    auto scan = [&](const Run &r) {
        const MpecProblem p = registry_get(r.problem);
        for (std::size_t j = 0; j < r.events.size(); ++j) {
            const auto &o = r.outcomes[j];
            if (!o || !(o->gamma < 1.0))
                continue;
            ++fired;
            const double lhs = std::abs(evaluate(p, r.events[j].x).grad_Q.dot(o->gamma * o->t_raw));
            const double rel = std::abs(lhs - o->delta) / o->delta;
            worst = std::max(worst, rel);
            if (rel > 1e-12)
                v.fail(r.problem + " from " + point(r.x0) + ": relative error " + num(rel));
        }
    };
    for (const Run &r : g_runs)
        scan(r);
    for (const Run &r : extra)
        scan(r);
    if (v.pass)
        v.detail = std::to_string(g_runs.size() + extra.size()) + " runs, scaling fired " + std::to_string(fired) +
                   " times, worst relative error " + num(worst);
    return v;
}

Verdict criterion6() {
    Verdict v;
    std::mt19937_64 rng(1006);
    ActiveSetQpSolver solver;
    int feasible = 0, infeasible = 0;
    double worst_obj = 0.0, worst_kkt = 0.0;
    const auto t0 = Clock::now();
    while (feasible < 200) {
        const QpProblem qp = testing::random_qp(rng);
        const auto oracle = testing::enumerate_qp_optimum(qp);
        const QpSolution sol = solver.solve(qp);
        if (!oracle) {
            ++infeasible;
            if (sol.status != QpStatus::Infeasible)
                v.fail("oracle-infeasible QP reported " + std::string(sol.status == QpStatus::Optimal ? "optimal" : "other"));
            continue;
        }
        ++feasible;
        if (sol.status != QpStatus::Optimal) {
            v.fail("feasible QP not solved");
            continue;
        }
        const double diff = std::abs(qp.objective(sol.t) - *oracle);
        worst_obj = std::max(worst_obj, diff);
        worst_kkt = std::max(worst_kkt, sol.kkt_residual);
        if (diff > 1e-8)
            v.fail("objective differs by " + num(diff));
        if (sol.kkt_residual > 1e-8)
            v.fail("KKT residual " + num(sol.kkt_residual));
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (secs >= 5.0)
        v.fail("suite took " + num(secs) + " s");
    if (v.pass)
        v.detail = "200 QPs (+" + std::to_string(infeasible) + " infeasible), worst objective gap " + num(worst_obj) +
                   ", worst KKT " + num(worst_kkt) + ", " + num(secs) + " s";
    return v;
}

Verdict criterion7() {
    Verdict v;
    const Evaluation e = evaluate(registry_get("quad_branch"), vec({0.6, 0.2}));
    const Vector s = complementarity_step(e).s;
    ActiveSetQpSolver solver;
    double prev = std::numeric_limits<double>::infinity(), last = 0.0;
    std::string trail;
    for (double u : {1.0, 1e-2, 1e-4, 1e-8}) {
        const QpSolution sol = solver.solve(tangential_qp(e, s, Matrix::Identity(2, 2), u));
        if (sol.status != QpStatus::Optimal) {
            v.fail("QP not solved at u = " + num(u));
            return v;
        }
        last = std::abs(e.grad_Q.dot(sol.t));
        trail += (trail.empty() ? "" : " ") + num(last);
        if (last > prev)
            v.fail("|grad Q't| increased at u = " + num(u));
        prev = last;
    }
    if (last > 1e-3)
        v.fail("|grad Q't| = " + num(last) + " at u = 1e-8");
    if (v.pass)
        v.detail = "|grad Q't(u)| = " + trail;
    return v;
}

Verdict criterion8() {
    Verdict v;
    const MpecProblem p = registry_get("lin_biactive");
    const double theta_max = 1.0;
    const double target = 0.5 * theta_max;
    const RestorationReport rr = restore(p, vec({-1, -1}), target);
    if (!rr.converged || rr.theta_after > target)
        v.fail("theta " + num(rr.theta_after) + " above target " + num(target));
    if (rr.inner_iterations > 200)
        v.fail(std::to_string(rr.inner_iterations) + " inner iterations");
    for (std::size_t k = 1; k < rr.theta_history.size(); ++k)
        if (rr.theta_history[k] > rr.theta_history[k - 1])
            v.fail("theta increased at inner step " + std::to_string(k));
    if (v.pass)
        v.detail = "theta " + num(rr.theta_before) + " -> " + num(rr.theta_after) + " in " +
                   std::to_string(rr.inner_iterations) + " inner iterations";
    return v;
}

Verdict criterion9() {
    Verdict v;
    std::mt19937_64 rng(1009);
    int checked = 0;
    double worst = 0.0;
    for (const std::string &name : registry_names()) {
        const MpecProblem p = registry_get(name);
        for (int k = 0; k < 20; ++k) {
            const Vector x = uniform_point(rng, p.n, -2.0, 2.0);
            const GradientReport g = check_gradients(p, x, 1e-6, 1e-6);
            ++checked;
            worst = std::max(worst, g.worst());
            if (!g.pass)
                v.fail(name + " at " + point(x) + ": error " + num(g.worst()));
        }
    }
    if (v.pass)
        v.detail = std::to_string(checked) + " checks, worst relative error " + num(worst);
    return v;
}

Verdict criterion10() {
    Verdict v;
    const auto dir = std::filesystem::temp_directory_path();
    int compared = 0;
    for (const char *name : {"lin_biactive", "quad_branch", "mixed_eq", "cstat_fixture", "nl_quad_branch"}) {
        const MpecProblem p = registry_get(name);
        const Vector x0 = *p.x0;
        const std::string a = (dir / (std::string("mpec_accept_") + name + "_a.csv")).string();
        const std::string b = (dir / (std::string("mpec_accept_") + name + "_b.csv")).string();
        emit_trace(solve(p, x0).trace, a);
        emit_trace(solve(p, x0).trace, b);
        if (read_text_file(a) != read_text_file(b))
            v.fail(std::string(name) + ": traces differ");
        std::filesystem::remove(a);
        std::filesystem::remove(b);
        ++compared;
    }
    if (v.pass)
        v.detail = std::to_string(compared) + " problems, traces byte-identical";
    return v;
}

} // namespace

int main() {
    const SolverConfig cfg;
    const std::vector<std::pair<const char *, std::function<Verdict()>>> criteria = {
        {"fixture convergence", criterion1},
        {"classifier fixtures", criterion2},
        {"funnel invariants", [&] { return criterion3(cfg); }},
        {"complementarity-step identity", criterion4},
        {"scaling exactness", criterion5},
        {"QP oracle equivalence", criterion6},
        {"penalty trend", criterion7},
        {"restoration", criterion8},
        {"gradient checks", criterion9},
        {"determinism", criterion10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception &e) {
            v.fail(std::string("exception: ") + e.what());
        }
        failed += !v.pass;
        std::printf("criterion %2zu %-30s %s  %s\n", i + 1, criteria[i].first, v.pass ? "PASS" : "FAIL",
                    v.detail.c_str());
    }
    std::fflush(stdout);
    return failed == 0 ? 0 : 1;
}

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Optional arguments select criteria by number, e.g. `acceptance 1 2 7`.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "occtime/dual.hpp"
#include "occtime/mc_sim.hpp"
#include "occtime/penalty.hpp"
#include "occtime/props.hpp"
#include "occtime/verify.hpp"

using namespace occtime;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "FAILED ") + what;
    }
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

std::string describe(const PropReport& r) {
    std::string s = r.id + " worst margin " + fmt("%.3g", r.worst_margin) + " over " +
                    std::to_string(r.points.size()) + " points";
    for (const PointCheck& p : r.points) {
        if (!p.pass) {
            s += " [" + p.label + " at " + fmt("%g", p.x) + ": " + fmt("%.10g", p.lhs) + " vs " + fmt("%.10g", p.rhs) +
                 "]";
            break;
        }
    }
    return s;
}

const std::vector<ModelParams> all_sets = {canonical_params(), fixtures::second_params(),
                                           fixtures::r_above_lambda_params()};
const std::vector<double> mc_w0 = {-2.0, 0.0, 10.0};

SimConfig mc_config(double w0) {
    SimConfig c;
    c.w0 = w0;
    c.dt = 1e-3;
    c.n_paths = 200000;
    c.seed = 20240601;
    return c;
}

Outcome criterion1() {
    Outcome o;
    for (const ModelParams& p : {canonical_params(), fixtures::second_params()}) {
        const PropReport r = check_boundaries(solve_fbp(p));
        o.require(r.pass, describe(r));
    }
    return o;
}

Outcome criterion2() {
    Outcome o;
    for (const ModelParams& p : {canonical_params(), fixtures::second_params()}) {
        const PropReport r = check_hjb_residual(solve_fbp(p), 2000);
        o.require(r.pass, describe(r));
    }
    return o;
}

Outcome criterion3() {
    Outcome o;
    const PropReport r = check_hjb_oracle(canonical_params(), 4000);
    o.require(r.pass, "max error " + fmt("%.3g", r.points[0].lhs) + " years, ratio " + fmt("%.3g", r.points[1].lhs));
    return o;
}

Outcome criterion4() {
    Outcome o;
    const FbpSolution s = solve_fbp(canonical_params());
    const Strategy pi = optimal_strategy(s);
    for (double w0 : mc_w0) {
        const SimEstimate e = simulate(s, pi, mc_config(w0));
        const double gap = e.mean - value(s, w0), tol = 3.0 * e.std_error + 0.05;
        o.require(std::abs(gap) <= tol && e.warnings.empty(),
                  "w0=" + fmt("%g", w0) + " gap " + fmt("%+.4f", gap) + " tol " + fmt("%.4f", tol));
    }
    return o;
}

Outcome criterion5() {
    Outcome o;
    const FbpSolution s = solve_fbp(canonical_params());
    const std::vector<Strategy> rules = {Strategy::zero(), Strategy::constant(pi_ruin(s.k, s.params, 0.0)),
                                         ruin_min_strategy(s)};
    for (const Strategy& rule : rules) {
        for (double w0 : mc_w0) {
            const SimEstimate e = simulate(s, rule, mc_config(w0));
            const double bound = value(s, w0) - 3.0 * e.std_error - 0.05;
            o.require(e.mean >= bound, rule.name() + " w0=" + fmt("%g", w0) + " excess " +
                                           fmt("%+.4f", e.mean - value(s, w0)));
        }
    }
    return o;
}

Outcome criterion6() {
    Outcome o;
    const ModelParams c = canonical_params();
    const FbpSolution s = solve_fbp(c);
    std::vector<PropReport> reports = {
        check_pi_comparison(s),
        check_pi_monotone(s),
        check_pi_monotone(solve_fbp(fixtures::r_above_lambda_params())),
        check_L_monotonicity(c, {5.0, 10.0, 20.0}),
        check_M_limit(c, -1.0, {10.0, 100.0, 1000.0}, 0.05),
        check_pi_growth(c, {-0.5, -1.0, -2.0}, 1e3, 1e4, 0.01),
    };
    for (const PropReport& r : reports) o.require(r.pass, describe(r) + (r.note.empty() ? "" : " (" + r.note + ")"));
    return o;
}

Outcome criterion7() {
    Outcome o;
    for (const ModelParams& p : {canonical_params(), fixtures::r_above_lambda_params()}) {
        const PropReport r = check_dyL_dL(p);
        o.require(r.pass, describe(r));
    }
    return o;
}

Outcome criterion8() {
    Outcome o;
    for (const ModelParams& p : {canonical_params(), fixtures::second_params()}) {
        const PropReport r = check_legendre(solve_fbp(p), 500);
        o.require(r.pass, describe(r));
    }
    return o;
}

Outcome criterion9() {
    Outcome o;
    double worst_reduction = 0.0;
    for (const ModelParams& p : all_sets) {
        const FbpSolution b = solve_fbp(p);
        const MultiFbpSolution m = solve_penalized(p, indicator_penalty());
        auto rel = [](double a, double x) { return std::abs(a - x) / std::max(1.0, std::abs(x)); };
        worst_reduction = std::max({worst_reduction, rel(m.bounds[1], b.y0), rel(m.yL, b.yL), rel(m.A[0], b.D1),
                                    rel(m.A[1], b.d1), rel(m.C[1], b.d2)});
        for (int i = 1; i < 500; ++i) {
            const double w = -p.L + (p.safe_level() + p.L) * i / 500.0;
            worst_reduction = std::max(worst_reduction, rel(value_penalized(m, w), value(b, w)));
            if (w != 0.0) worst_reduction = std::max(worst_reduction, rel(pi_penalized(m, w), pi_star(b, w)));
        }
    }
    o.require(worst_reduction <= 1e-9, "indicator reduction " + fmt("%.2e", worst_reduction));

    const ModelParams c = canonical_params();
    const StepPenalty two{{0.0, -2.0}, {1.0, 2.0}};
    const MultiFbpSolution m = solve_penalized(c, two);
    double worst_scale = 0.0;
    for (double k : {0.5, 3.0, 10.0}) {
        const MultiFbpSolution mk = solve_penalized(c, StepPenalty{two.thresholds, {k * 1.0, k * 2.0}});
        for (int i = 1; i < 200; ++i) {
            const double w = -c.L + (c.safe_level() + c.L) * i / 200.0;
            const double v = value_penalized(m, w);
            worst_scale = std::max(worst_scale, std::abs(value_penalized(mk, w) - k * v) / (k * v));
        }
    }
    o.require(worst_scale <= 1e-10, "scaling " + fmt("%.2e", worst_scale));

    const FbpSolution s = solve_fbp(c);
    const Strategy pi = penalized_strategy(m);
    for (double w0 : {-3.0, -1.0, 5.0}) {
        const SimEstimate e = simulate(s, pi, mc_config(w0), two);
        const double gap = e.mean - value_penalized(m, w0), tol = 3.0 * e.std_error + 0.05;
        o.require(std::abs(gap) <= tol, "two-step w0=" + fmt("%g", w0) + " gap " + fmt("%+.4f", gap) + " tol " +
                                            fmt("%.4f", tol));
    }
    return o;
}

std::string run_cli(const std::string& args) {
    const fs::path out = fs::temp_directory_path() / "occtime_acceptance_out.txt";
    const std::string cmd = std::string(OCCTIME_CLI) + " " + args + " > " + out.string() + " 2>/dev/null";
    [[maybe_unused]] const int status = std::system(cmd.c_str());
    std::ifstream in(out, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion10() {
    Outcome o;
    const fs::path cfg = fs::temp_directory_path() / "occtime_acceptance.json";
    std::ofstream(cfg) << R"({"params": {"r": 0.02, "mu": 0.06, "sigma": 0.20, "c": 1.0, "lambda": 0.04, "L": 10.0},
 "sim": {"w0": -1.0, "dt": 0.001, "n_paths": 4000, "seed": 99}})";
    for (const char* cmd : {"verify", "simulate"}) {
        const std::string args = "--config " + cfg.string() + " --command " + cmd;
        const std::string a = run_cli(args), b = run_cli(args);
        o.require(!a.empty() && a == b, std::string(cmd) + " output " + std::to_string(a.size()) + " bytes" +
                                            (a == b ? " identical" : " differs"));
    }
    return o;
}

struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, "boundary exactness", 1.0, criterion1},
        {2, "HJB residual of the closed form", 1.0, criterion2},
        {3, "finite-difference oracle", 60.0, criterion3},
        {4, "Monte Carlo consistency", 300.0, criterion4},
        {5, "suboptimality of benchmark rules", 600.0, criterion5},
        {6, "proposition suite", 30.0, criterion6},
        {7, "dyL/dL identity", 1.0, criterion7},
        {8, "Legendre integrity", 1.0, criterion8},
        {9, "penalty extension", 600.0, criterion9},
        {10, "determinism", 0.0, criterion10},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    int failures = 0;
    for (const Criterion& c : criteria) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = c.limit_s == 0.0 || secs < c.limit_s;
        const bool pass = o.pass && in_time;
        failures += !pass;
        const std::string limit = c.limit_s == 0.0 ? "no limit" : fmt("limit %.0f s", c.limit_s);
        std::printf("%s %2d %s (%.2f s, %s%s): %s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs, limit.c_str(),
                    in_time ? "" : ", over time", o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}

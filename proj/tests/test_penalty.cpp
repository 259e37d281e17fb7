#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "occtime/dual.hpp"
#include "occtime/penalty.hpp"

using namespace occtime;

namespace {

const StepPenalty two_step{{0.0, -2.0}, {1.0, 2.0}};

std::vector<double> wealth_grid(const ModelParams& p, int n) {
    std::vector<double> w;
    for (int i = 1; i < n; ++i) w.push_back(-p.L + (p.safe_level() + p.L) * i / n);
    return w;
}

}  // namespace

TEST_CASE("indicator penalty reproduces the baseline") {
    for (const ModelParams& p :
         {canonical_params(), fixtures::second_params(), fixtures::r_above_lambda_params()}) {
        const FbpSolution b = solve_fbp(p);
        const MultiFbpSolution m = solve_penalized(p, indicator_penalty());
        REQUIRE(m.segments() == 2);
        CHECK(m.bounds[1] == doctest::Approx(b.y0).epsilon(1e-12));
        CHECK(m.yL == doctest::Approx(b.yL).epsilon(1e-12));
        CHECK(m.A[0] == doctest::Approx(b.D1).epsilon(1e-9));
        CHECK(m.A[1] == doctest::Approx(b.d1).epsilon(1e-9));
        CHECK(m.C[1] == doctest::Approx(b.d2).epsilon(1e-9));
        CHECK(m.C[0] == 0.0);
        for (double w : wealth_grid(p, 500)) {
            CHECK(std::abs(value_penalized(m, w) - value(b, w)) <= 1e-9);
            if (w != 0.0) CHECK(std::abs(pi_penalized(m, w) - pi_star(b, w)) <= 1e-9 * pi_star(b, w));
        }
        CHECK(pi_penalized(m, 0.0, Side::below) == doctest::Approx(pi_star(b, 0.0, Side::below)).epsilon(1e-9));
        CHECK(pi_penalized(m, 0.0, Side::above) == doctest::Approx(pi_star(b, 0.0, Side::above)).epsilon(1e-9));
        CHECK_THROWS_AS(pi_penalized(m, 0.0), std::domain_error);
    }
}

TEST_CASE("zero penalty is trivial") {
    const MultiFbpSolution m = solve_penalized(canonical_params(), StepPenalty{{0.0}, {0.0}});
    CHECK(m.trivial);
    for (double w : {-9.0, -1.0, 0.0, 5.0, 30.0}) {
        CHECK(value_penalized(m, w, 1.5) == 1.5);
    }
    CHECK(value_penalized(m, -10.0, 1.5) == 1.5);
    CHECK(pi_penalized(m, -1.0) == 0.0);
}

TEST_CASE("boundary values and matching conditions") {
    const ModelParams p = canonical_params();
    const MultiFbpSolution m = solve_penalized(p, two_step);
    const double cr = p.safe_level();
    CHECK(value_penalized(m, cr, 0.7) == 0.7);
    CHECK(value_penalized(m, -p.L, 0.7) == 0.7 + 2.0 / p.lambda);
    const std::size_t K = m.segments() - 1;
    CHECK(mhat_penalized(m, m.yL, K) == doctest::Approx(2.0 / p.lambda - p.L * m.yL).epsilon(1e-12));
    CHECK(mhat_derivs_penalized(m, m.yL, K).d1 == doctest::Approx(-p.L).epsilon(1e-12));
    CHECK(mhat_penalized(m, 0.0, 0) == 0.0);
    for (std::size_t k = 1; k <= K; ++k) {
        const double y = m.bounds[k];
        CHECK(mhat_penalized(m, y, k) == doctest::Approx(mhat_penalized(m, y, k - 1)).epsilon(1e-12));
        CHECK(mhat_derivs_penalized(m, y, k).d1 ==
              doctest::Approx(mhat_derivs_penalized(m, y, k - 1).d1).epsilon(1e-10).scale(1.0));
        CHECK(mhat_derivs_penalized(m, y, k).d1 ==
              doctest::Approx(two_step.thresholds[k - 1]).epsilon(1e-10).scale(1.0));
        CHECK(m.bounds[k] < m.bounds[k + 1]);
    }
}

TEST_CASE("allocation jumps by the level step at each threshold") {
    const ModelParams p = canonical_params();
    const MultiFbpSolution m = solve_penalized(p, two_step);
    const double delta = constants(p).delta;
    for (std::size_t k = 1; k <= two_step.size(); ++k) {
        const double w = two_step.thresholds[k - 1];
        const double jump = pi_penalized(m, w, Side::below) - pi_penalized(m, w, Side::above);
        const double df = m.level(k) - m.level(k - 1);
        CHECK(jump == doctest::Approx((p.mu - p.r) * df / (p.sigma * p.sigma * delta * m.bounds[k])).epsilon(1e-9));
    }
    CHECK(pi_penalized(m, p.safe_level() - 1e-9) < 1e-6);
}

TEST_CASE("scaling and monotonicity in the penalty") {
    for (const ModelParams& p : {canonical_params(), fixtures::r_above_lambda_params()}) {
        const MultiFbpSolution f = solve_penalized(p, two_step);
        const MultiFbpSolution g = solve_penalized(p, StepPenalty{{0.0, -2.0}, {3.5, 7.0}});
        const MultiFbpSolution lower = solve_penalized(p, indicator_penalty());
        const MultiFbpSolution upper = solve_penalized(p, StepPenalty{{0.0}, {2.0}});
        for (double w : wealth_grid(p, 200)) {
            const double v = value_penalized(f, w);
            CHECK(std::abs(value_penalized(g, w) - 3.5 * v) <= 1e-10 * 3.5 * v + 1e-300);
            CHECK(value_penalized(lower, w) <= v + 1e-12);
            CHECK(v <= value_penalized(upper, w) + 1e-12);
        }
        CHECK(value_penalized(lower, -1.0) < value_penalized(f, -1.0));
        CHECK(value_penalized(f, -1.0) < value_penalized(upper, -1.0));
    }
}

TEST_CASE("dual concavity and primal convexity") {
    const ModelParams p = canonical_params();
    const MultiFbpSolution m = solve_penalized(p, two_step);
    for (std::size_t k = 0; k < m.segments(); ++k) {
        for (int i = 0; i <= 50; ++i) {
            const double y = m.bounds[k] + (m.bounds[k + 1] - m.bounds[k]) * i / 50.0;
            if (y == 0.0) continue;
            CHECK(mhat_derivs_penalized(m, y, k).d2 < 0.0);
        }
    }
    const std::vector<double> ws = wealth_grid(p, 400);
    for (std::size_t i = 1; i + 1 < ws.size(); ++i) {
        const double h = ws[i] - ws[i - 1];
        const double second =
            value_penalized(m, ws[i - 1]) - 2.0 * value_penalized(m, ws[i]) + value_penalized(m, ws[i + 1]);
        CHECK(second / (h * h) > 0.0);
    }
}

TEST_CASE("penalty validation") {
    const ModelParams p = canonical_params();
    CHECK_THROWS_AS(solve_penalized(p, StepPenalty{{0.0, -10.0}, {1.0, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(solve_penalized(p, StepPenalty{{0.0, 0.0}, {1.0, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(solve_penalized(p, StepPenalty{{0.5}, {1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(solve_penalized(p, StepPenalty{{0.0, -1.0}, {2.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(solve_penalized(p, StepPenalty{{}, {}}), std::invalid_argument);
}

TEST_CASE("tabulated penalized rule and small-scale simulation") {
    const ModelParams p = canonical_params();
    const MultiFbpSolution m = solve_penalized(p, two_step);
    const Strategy pi = penalized_strategy(m);
    for (double w : wealth_grid(p, 300)) {
        if (w == 0.0 || w == -2.0) continue;
        CHECK(std::abs(pi(w) - pi_penalized(m, w)) <= 1e-6 * pi_penalized(m, w));
    }
    SimConfig c;
    c.w0 = -1.0;
    c.n_paths = 6000;
    c.seed = 9;
    const SimEstimate e = simulate(solve_fbp(p), pi, c, two_step);
    CHECK(std::abs(e.mean - value_penalized(m, -1.0)) <= 3 * e.std_error + 0.05);
}

#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "occtime/dual.hpp"
#include "occtime/props.hpp"

using namespace occtime;

namespace {

void require_pass(const PropReport& r, std::size_t min_points) {
    INFO(r.id << " worst margin " << r.worst_margin);
    CHECK(r.pass);
    CHECK(r.points.size() >= min_points);
    for (const PointCheck& p : r.points) {
        CHECK(p.pass == (p.margin > 0.0));
        CHECK(r.worst_margin <= p.margin);
    }
}

}  // namespace

TEST_CASE("pi* against the ruin-minimizing rule") {
    for (const ModelParams& p : {canonical_params(), fixtures::r_above_lambda_params()}) {
        const FbpSolution s = solve_fbp(p);
        const PropReport r = check_pi_comparison(s);
        require_pass(r, 100);
        const PointCheck& jump = r.points.back();
        CHECK(jump.label == "jump_at_zero");
        CHECK(jump.rhs == doctest::Approx(p.leverage() / (s.k.delta * s.y0)).epsilon(1e-14));
    }
}

TEST_CASE("monotonicity branch of pi* on the negative side") {
    const PropReport up = check_pi_monotone(solve_fbp(canonical_params()));
    require_pass(up, 50);
    CHECK(up.note.rfind("increasing", 0) == 0);
    CHECK(up.points.back().label == "r_below_lambda");

    const PropReport down = check_pi_monotone(solve_fbp(fixtures::r_above_lambda_params()));
    require_pass(down, 50);
    CHECK(down.note.rfind("decreasing", 0) == 0);

    // r = lambda puts the increasing criterion exactly on its boundary.
    ModelParams eq = canonical_params();
    eq.lambda = eq.r;
    const MarketConstants k = constants(eq);
    CHECK(k.B1 * (k.B1 - 1.0) + k.B2 * (1.0 - k.B2) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
}

TEST_CASE("pi* grows and M shrinks with L") {
    for (const ModelParams& p : {canonical_params(), fixtures::r_above_lambda_params()}) {
        require_pass(check_L_monotonicity(p, {0.5 * p.L, p.L, 2.0 * p.L}), 200);
    }
    CHECK_THROWS_AS(check_L_monotonicity(canonical_params(), {5.0, 10.0}), std::invalid_argument);
    CHECK_THROWS_AS(check_L_monotonicity(canonical_params(), {5.0, 10.0, 10.0}), std::invalid_argument);
}

TEST_CASE("M limit report against the reference values") {
    const PropReport r = check_M_limit(canonical_params(), -1.0, {5.0, 20.0, 100.0, 1000.0}, 0.05);
    REQUIRE(r.points.size() == 4);
    for (int i = 0; i < 3; ++i) {
        CHECK(r.points[i].pass);
        CHECK(r.points[i].lhs == doctest::Approx(fixtures::canonical::by_L[i + 1][1]).epsilon(1e-9));
    }
    CHECK(r.points[3].label == "below_bound");
    CHECK(r.points[3].lhs == doctest::Approx(fixtures::canonical::by_L[3][1]).epsilon(1e-9));
    CHECK(r.points[3].pass == (fixtures::canonical::by_L[3][1] < 0.05));
}

TEST_CASE("large-L constants") {
    const ModelParams c = canonical_params();
    const LimitConstants lim = limit_constants(constants(c), c);
    CHECK(lim.z == doctest::Approx(fixtures::canonical::z).epsilon(1e-13));
    CHECK(lim.z == doctest::Approx(std::pow(std::sqrt(2.0) - 1.0, 1.0 / std::sqrt(2.0))).epsilon(1e-13));
    const ModelParams s = fixtures::second_params();
    CHECK(limit_constants(constants(s), s).z == doctest::Approx(fixtures::second::z).epsilon(1e-13));

    const PropReport g = check_pi_growth(c, {-0.5, -1.0, -2.0});
    REQUIRE(g.points.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(g.points[i].rhs == doctest::Approx(fixtures::canonical::slope_1e3[i]).epsilon(1e-9));
        CHECK(g.points[i].lhs == doctest::Approx(fixtures::canonical::slope_1e4[i]).epsilon(1e-9));
        // Both sample slopes approach the limit from above.
        CHECK(g.points[i].lhs > lim.slope);
        CHECK(g.points[i].rhs > g.points[i].lhs);
    }
}

TEST_CASE("dyL/dL closed form") {
    CHECK(dyL_dL_closed(solve_fbp(canonical_params())) ==
          doctest::Approx(fixtures::canonical::dyL_dL).epsilon(1e-11));
    CHECK(dyL_dL_closed(solve_fbp(fixtures::second_params())) ==
          doctest::Approx(fixtures::second::dyL_dL).epsilon(1e-11));
    CHECK(dyL_dL_closed(solve_fbp(fixtures::r_above_lambda_params())) ==
          doctest::Approx(fixtures::r_above_lambda::dyL_dL).epsilon(1e-11));
    for (const ModelParams& p : {canonical_params(), fixtures::r_above_lambda_params()}) {
        const PropReport r = check_dyL_dL(p);
        require_pass(r, 2);
        CHECK(r.note == "dyL/dL negative");
    }
}

TEST_CASE("inequality behind dM/dL < 0") {
    for (const ModelParams& p : {canonical_params(), fixtures::second_params(), fixtures::r_above_lambda_params()}) {
        const FbpSolution s = solve_fbp(p);
        require_pass(check_master_inequality(s), 60);
        // The direct form at y0 reduces to the simplified one up to a positive factor.
        const double B1 = s.k.B1, B2 = s.k.B2, cr = s.k.safe_level;
        const double simplified = -(B1 - B2) / B1 * cr + B2 / (p.lambda * s.y0);
        CHECK(std::signbit(master_lhs(s, s.y0)) == std::signbit(simplified));
    }
}

TEST_CASE("run_all covers every relation") {
    const std::vector<PropReport> all = run_all(fixtures::r_above_lambda_params());
    REQUIRE(all.size() == 7);
    CHECK(all[0].id == "pi_comparison");
    CHECK(all[6].id == "master_inequality");
    for (const PropReport& r : all) {
        CHECK(!r.points.empty());
        CHECK(!r.relation.empty());
    }
}

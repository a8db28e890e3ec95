#include <doctest.h>

#include "degenvi/problems.hpp"
#include "degenvi/solve.hpp"
#include "lcp_oracle.hpp"

#include <cmath>

using namespace degenvi;

namespace {

const HestonParams kPut{0.5, -0.5, 2.0, 0.0625, 0.05, 0.0, 0.1};

Field constant(double c) {
    return [c](Point) { return c; };
}

}  // namespace

TEST_CASE("penalty function") {
    CHECK(penalty(-0.5, 0.1) == doctest::Approx(-5.0));
    CHECK(penalty(0.0, 0.1) == 0.0);
    CHECK(penalty(0.3, 0.1) == 0.0);
    CHECK(penalty(-1.0, 0.05) == doctest::Approx(2.0 * penalty(-1.0, 0.1)));
}

TEST_CASE("PSOR on one unknown") {
    SparseMatrix M(1, 1);
    M.insert(0, 0) = 2.0;
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(1), b(1);
    b[0] = 1.0;
    CHECK(psor_oracle(M, b, psi)[0] == doctest::Approx(0.5));
    b[0] = -1.0;
    CHECK(psor_oracle(M, b, psi)[0] == doctest::Approx(0.0));
}

TEST_CASE("schedule validation") {
    PenaltySchedule s;
    s.shrink = 1.5;
    CHECK_THROWS_AS(validate(s), Error);
    s = {};
    s.eps_min = 2.0;
    CHECK_THROWS_AS(validate(s), Error);
    CHECK_NOTHROW(validate(PenaltySchedule{}));
}

TEST_CASE("zero data gives the zero solution") {
    const DerivedConstants c = derive_constants(kPut);
    auto mesh = build_mesh(HalfPlaneDomain::rectangle(0.0, 1.0, 1.0), 8, 8, 1.0);
    const AssembledForm form = assemble(kPut, c, mesh, 0.0);
    const GridFunction u = solve_ve(form, constant(0.0));
    for (double v : u.values()) CHECK(v == 0.0);
}

TEST_CASE("inactive obstacle reproduces the equation") {
    const DerivedConstants c = derive_constants(kPut);
    auto mesh = build_mesh(HalfPlaneDomain::rectangle(0.0, 1.0, 1.0), 10, 10, 1.0);
    const AssembledForm form = assemble(kPut, c, mesh, 0.0);
    const GridFunction ve = solve_ve(form, constant(1.0));
    const ObstacleProblem prob = make_obstacle_problem(form, constant(1.0), constant(-1e6));
    const PenalizedResult pen = solve_penalized(prob, 1e-3, std::nullopt);
    CHECK((pen.u - ve.free_values()).lpNorm<Eigen::Infinity>() <= 1e-13);
    const ViResult vi = solve_vi(prob);
    CHECK((vi.u.free_values() - ve.free_values()).lpNorm<Eigen::Infinity>() <= 1e-13);
    CHECK(vi.report.penalty_sup == 0.0);
}

TEST_CASE("penalty and PSOR against enumeration") {
    const DerivedConstants c = derive_constants(kPut);
    auto mesh = build_mesh(HalfPlaneDomain::rectangle(0.0, 1.0, 1.0), 3, 3, 1.0);
    REQUIRE(mesh->free_count() <= 8);
    const AssembledForm form = assemble(kPut, c, mesh, 0.0);
    REQUIRE(coercivity_shift(form) == 0.0);
    const ObstacleProblem prob = make_obstacle_problem(form, constant(0.0), bump_field(0.5, 0.0, 0.6, 0.9, 0.5));
    const Eigen::VectorXd psi = free_obstacle(prob);
    const oracle::LcpSolution ex = oracle::enumerate_lcp(Eigen::MatrixXd(form.matrix), prob.rhs, psi);
    REQUIRE(ex.matches == 1);
    int active = 0;
    for (int i = 0; i < psi.size(); ++i) active += std::abs(ex.u[i] - psi[i]) < 1e-14 ? 1 : 0;
    CHECK(active > 0);
    CHECK(active < psi.size());
    const Eigen::VectorXd ps = psor_oracle(form.matrix, prob.rhs, psi);
    CHECK((ps - ex.u).lpNorm<Eigen::Infinity>() <= 1e-10);
    const ViResult vi = solve_vi(prob);
    CHECK((vi.u.free_values() - ex.u).lpNorm<Eigen::Infinity>() <= 1e-6);
}

TEST_CASE("unreachable target carries the best iterate") {
    const DerivedConstants c = derive_constants(kPut);
    auto mesh = build_mesh(HalfPlaneDomain::rectangle(0.0, 1.0, 1.0), 6, 6, 1.0);
    const AssembledForm form = assemble(kPut, c, mesh, 0.0);
    const ObstacleProblem prob = make_obstacle_problem(form, constant(-1.0), bump_field(0.5, 0.0, 0.6, 0.9, 0.5));
    PenaltySchedule s;
    s.outer_tol = 1e-300;
    s.eps_min = 1e-4;
    try {
        (void)solve_vi(prob, s);
        FAIL("expected ScheduleExhausted");
    } catch (const ScheduleExhausted& e) {
        CHECK_FALSE(e.best().report.converged);
        CHECK(e.best().report.final_eps >= 1e-4);
        CHECK(e.code() == Errc::ScheduleExhausted);
    }
}

TEST_CASE("perpetual put") {
    const HalfPlaneDomain strip = HalfPlaneDomain::rectangle(-1.0, 1.0, 1.0);
    AmericanOptions opts;
    opts.nx = 32;
    opts.ny = 16;
    const AmericanResult put = perpetual_american(strip, kPut, Payoff{PayoffKind::Put, 1.0, {}}, opts);
    CHECK(put.report.converged);
    for (int k = 0; k < put.value.mesh().node_count(); ++k) {
        CHECK(put.value[k] >= put.payoff[k] - opts.schedule.outer_tol);
        CHECK(put.value[k] >= -1e-12);
    }
    CHECK(put.exercise_boundary.size() == static_cast<std::size_t>(opts.ny + 1));

    Payoff never{PayoffKind::Custom, 1.0, constant(-1.0)};
    const AmericanResult zero = perpetual_american(strip, kPut, never, opts);
    for (double v : zero.value.values()) CHECK(std::abs(v) <= 1e-14);
}

#include <doctest.h>

#include "degenvi/model.hpp"

#include <cmath>

using namespace degenvi;

namespace {

Errc code_of(const HestonParams& p) {
    try {
        validate(p);
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::NotFound;
}

std::string field_of(const HestonParams& p) {
    try {
        validate(p);
    } catch (const InvalidCoefficient& e) {
        return e.field();
    }
    return "";
}

}  // namespace

TEST_CASE("default coefficients validate") { CHECK_NOTHROW(validate(HestonParams{})); }

TEST_CASE("invalid coefficients name the field") {
    HestonParams p;
    p.sigma = 0.0;
    CHECK(code_of(p) == Errc::InvalidCoefficient);
    CHECK(field_of(p) == "sigma");
    p = {};
    p.rho = 1.0;
    CHECK(field_of(p) == "rho");
    p = {};
    p.kappa = -1.0;
    CHECK(field_of(p) == "kappa");
    p = {};
    p.theta = 0.0;
    CHECK(field_of(p) == "theta");
    p = {};
    p.r = -0.1;
    CHECK(field_of(p) == "r");
    p = {};
    p.gamma = 0.0;
    CHECK(field_of(p) == "gamma");
}

TEST_CASE("derived constants by hand") {
    const DerivedConstants c = derive_constants(HestonParams{});
    CHECK(c.beta == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(c.mu == doctest::Approx(4.0 / 0.09).epsilon(1e-14));
    CHECK(c.mu == doctest::Approx(44.444).epsilon(1e-5));
    CHECK(c.a1 == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(c.b1 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(c.nu0 == doctest::Approx(0.09).epsilon(1e-14));
    CHECK(c.p == doctest::Approx(2.4).epsilon(1e-14));

    HestonParams s;
    s.sigma = 1.0;
    CHECK(derive_constants(s).nu0 == doctest::Approx(1.0));

    HestonParams one;
    one.kappa = 0.5;
    one.theta = 0.09;  // 2 kappa theta = sigma^2
    CHECK(derive_constants(one).beta == doctest::Approx(1.0).epsilon(1e-14));

    HestonParams g{0.5, -0.5, 1.0, 0.125, 0.05, 0.02, 0.1};
    const DerivedConstants d = derive_constants(g);
    CHECK(d.a1 == doctest::Approx(1.0 * -0.5 / 0.5 - 0.5));
    CHECK(d.b1 == doctest::Approx(0.05 - 0.02 - 1.0 * 0.125 * -0.5 / 0.5));
    CHECK(d.nu0 == doctest::Approx(std::min(1.0, 0.75 * 0.25)));
}

TEST_CASE("weight values") {
    HestonParams p{1.0, 0.0, 1.0, 0.5, 0.0, 0.0, 0.5};  // beta 1, mu 2
    const DerivedConstants c = derive_constants(p);
    REQUIRE(c.beta == doctest::Approx(1.0));
    REQUIRE(c.mu == doctest::Approx(2.0));
    CHECK(weight(p, c, {0.0, 1.0}) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    CHECK(weight(p, c, {2.0, 0.0}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));

    HestonParams q{1.0, 0.0, 2.0, 0.5, 0.0, 0.0, 0.5};  // beta 2
    const DerivedConstants cq = derive_constants(q);
    CHECK(weight(q, cq, {0.0, 0.0}) == 0.0);
    CHECK(weight(q, cq, {0.0, 1e-6}) < weight(q, cq, {0.0, 1e-3}));
    CHECK(weight(q, cq, {0.3, 0.7}) > 0.0);

    HestonParams h{1.0, 0.0, 0.25, 1.0, 0.0, 0.0, 0.5};  // beta 0.5
    const DerivedConstants ch = derive_constants(h);
    CHECK_THROWS_AS(weight(h, ch, {0.0, 0.0}), Error);
    CHECK(weight(h, ch, {0.0, 0.25}) == doctest::Approx(std::pow(0.25, -0.5) * std::exp(-ch.mu * 0.25)));
}

TEST_CASE("principal symbol") {
    HestonParams p{0.5, 0.3, 1.0, 0.1, 0.0, 0.0, 0.1};
    CHECK(principal_symbol(p, 1.0, 2.0) == doctest::Approx((1.0 + 2 * 0.3 * 0.5 * 2.0 + 0.25 * 4.0) / 2.0));
}

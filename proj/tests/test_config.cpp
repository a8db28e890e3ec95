#include <doctest.h>

#include "degenvi/config.hpp"
#include "degenvi/run.hpp"

using namespace degenvi;
using nlohmann::json;

namespace {

Errc parse_code(const json& j) {
    try {
        (void)parse_config(j);
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::NotFound;
}

}  // namespace

TEST_CASE("minimal config takes defaults") {
    const RunConfig c = parse_config(json{{"command", "solve-ve"}});
    CHECK(c.mesh.nx == 32);
    CHECK(c.model.sigma == 0.3);
    CHECK_FALSE(c.lambda.has_value());
    CHECK(c.seed == 1);
}

TEST_CASE("config errors") {
    CHECK(parse_code({{"command", "solve-ve"}, {"bogus", 1}}) == Errc::ConfigError);
    CHECK(parse_code({{"command", "fly"}}) == Errc::ConfigError);
    CHECK(parse_code({{"command", "solve-ve"}, {"model", {{"rho", 1.5}}}}) == Errc::InvalidCoefficient);
    CHECK(parse_code({{"command", "solve-ve"}, {"refine", 9}}) == Errc::ConfigError);
    CHECK(parse_code({{"command", "solve-ve"}, {"schema_version", 7}}) == Errc::ConfigError);
    CHECK(parse_code({{"command", "solve-ve"}, {"mesh", {{"nx", 0}}}}) == Errc::ConfigError);
    CHECK(parse_code({{"command", "price"}, {"obstacle", {{"kind", "zero"}}}}) == Errc::ConfigError);
}

TEST_CASE("lambda accepts auto or a number") {
    CHECK_FALSE(parse_config({{"command", "solve-ve"}, {"lambda", "auto"}}).lambda.has_value());
    CHECK(*parse_config({{"command", "solve-ve"}, {"lambda", 2.5}}).lambda == 2.5);
    CHECK(parse_code({{"command", "solve-ve"}, {"lambda", -1}}) == Errc::ConfigError);
}

TEST_CASE("schema lists the top-level keys") {
    const json s = config_schema();
    CHECK(s["$schema"] == "https://json-schema.org/draft/2020-12/schema");
    for (const char* k : {"command", "model", "domain", "mesh", "source", "obstacle", "schedule", "seed"})
        CHECK(s["properties"].contains(k));
}

TEST_CASE("built-in fields") {
    const HestonParams p;
    FieldSpec put{"put"};
    put.strike = 2.0;
    CHECK(make_field(put, p)({0.0, 0.3}) == doctest::Approx(1.0));
    CHECK(make_field(put, p)({1.0, 0.3}) == 0.0);
    FieldSpec k{"constant"};
    k.value = 4.0;
    CHECK(make_field(k, p)({0.1, 0.1}) == 4.0);
}

TEST_CASE("solve-vi report is reproducible") {
    json j = {{"command", "solve-vi"},
              {"model", {{"sigma", 0.5}, {"rho", -0.5}, {"kappa", 2.0}, {"theta", 0.0625}, {"r", 0.05}}},
              {"mesh", {{"nx", 8}, {"ny", 8}}},
              {"obstacle", {{"kind", "bump"}, {"cx", 0.5}, {"cy", 0.0}, {"ax", 0.4}, {"ay", 0.6}}}};
    const RunConfig c = parse_config(j);
    const RunArtifacts a = execute(c), b = execute(c);
    CHECK(a.pass);
    CHECK(a.report.dump() == b.report.dump());
    CHECK(a.fields_csv.rfind(kFieldsHeader, 0) == 0);
}

TEST_CASE("tabulated fields interpolate bilinearly") {
    const json j = {{"command", "solve-vi"},
                    {"obstacle",
                     {{"kind", "table"},
                      {"x", {0.0, 1.0, 2.0}},
                      {"y", {0.0, 1.0}},
                      {"values", {{0.0, 1.0, 2.0}, {1.0, 2.0, 5.0}}}}}};
    const RunConfig c = parse_config(j);
    const Field f = make_field(c.obstacle, c.model);
    CHECK(f({0.5, 0.5}) == doctest::Approx(1.0));
    CHECK(f({1.5, 1.0}) == doctest::Approx(3.5));
    CHECK(f({-3.0, 0.0}) == doctest::Approx(0.0));
    CHECK(f({9.0, 9.0}) == doctest::Approx(5.0));

    json bad = j;
    bad["obstacle"]["values"] = {{0.0, 1.0}, {1.0, 2.0}};
    CHECK(parse_code(bad) == Errc::ConfigError);
    bad = j;
    bad["obstacle"]["x"] = {0.0, 0.0, 1.0};
    CHECK(parse_code(bad) == Errc::ConfigError);
    json stray = {{"command", "solve-vi"}, {"obstacle", {{"kind", "bump"}, {"x", {0.0, 1.0}}}}};
    CHECK(parse_code(stray) == Errc::ConfigError);
}

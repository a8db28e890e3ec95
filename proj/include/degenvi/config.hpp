#pragma once

#include "degenvi/solve.hpp"

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>

namespace degenvi {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr int kReportSchemaVersion = 1;

struct DomainSpec {
    DomainKind kind = DomainKind::Rectangle;
    double x0 = 0.0, x1 = 1.0, height = 1.0;  // rectangle
    std::vector<Point> vertices;             // polygon
    double center_x = 0.0, radius = 1.0;     // half_disk
    int n_max = 8;                           // thorn
    double beta = 1.0;                       // thorn

    HalfPlaneDomain build() const;
};

struct MeshSpec {
    int nx = 32;
    int ny = 32;
    double grading = 1.0;
};

/// Named built-in field. Kinds: zero, constant(value), manufactured
/// (source only), bump(cx, cy, ax, ay, value), put(strike), call(strike),
/// tent(strike, value = width), table(x, y, values): bilinear on the
/// tensor grid, points outside clamped to the grid box.
struct FieldSpec {
    std::string kind = "zero";
    double value = 1.0;
    double strike = 1.0;
    double cx = 0.5, cy = 0.0, ax = 0.25, ay = 0.25;
    std::vector<double> table_x{}, table_y{};
    std::vector<double> table_values{};  ///< row-major, one row per table_y entry
};

struct RunConfig {
    std::string command;  ///< solve-ve | solve-vi | price | geometry | verify
    HestonParams model;
    DomainSpec domain;
    MeshSpec mesh;
    FieldSpec source;
    FieldSpec obstacle{"put"};
    PenaltySchedule schedule;
    std::optional<double> lambda;  ///< unset: coercivity probe
    int refine = 0;
    std::uint64_t seed = 1;
    std::string suite = "geometry";
    std::string out_dir = "out";
    bool psor_check = true;
};

/// Rejects unknown keys and invalid values with ConfigError; model
/// coefficients are validated with InvalidCoefficient.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

/// JSON Schema (draft 2020-12) describing the config document.
nlohmann::json config_schema();

Field make_field(const FieldSpec& spec, const HestonParams& params);

}  // namespace degenvi

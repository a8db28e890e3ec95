#include "degenvi/model.hpp"

#include <algorithm>
#include <cmath>

namespace degenvi {

const char* to_string(Errc code) {
    switch (code) {
    case Errc::InvalidCoefficient: return "InvalidCoefficient";
    case Errc::DegenerateInput: return "DegenerateInput";
    case Errc::NonIntegrable: return "NonIntegrable";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::UnsupportedDomainKind: return "UnsupportedDomainKind";
    case Errc::UnsupportedKind: return "UnsupportedKind";
    case Errc::ZeroFunction: return "ZeroFunction";
    case Errc::NonPositiveFunction: return "NonPositiveFunction";
    case Errc::BallNotContained: return "BallNotContained";
    case Errc::DegenerateDomain: return "DegenerateDomain";
    case Errc::QuadratureFailure: return "QuadratureFailure";
    case Errc::NotFound: return "NotFound";
    case Errc::MeshTooCoarse: return "MeshTooCoarse";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::NewtonDivergence: return "NewtonDivergence";
    case Errc::SingularJacobian: return "SingularJacobian";
    case Errc::ScheduleExhausted: return "ScheduleExhausted";
    case Errc::NotConverged: return "NotConverged";
    case Errc::EmptyBall: return "EmptyBall";
    case Errc::InsufficientRadii: return "InsufficientRadii";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IoError: return "IoError";
    }
    return "Unknown";
}

void validate(const HestonParams& params) {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(params.sigma) || params.sigma == 0.0) {
        throw InvalidCoefficient("sigma", "sigma != 0");
    }
    if (!finite(params.rho) || !(params.rho > -1.0 && params.rho < 1.0)) {
        throw InvalidCoefficient("rho", "-1 < rho < 1");
    }
    if (!finite(params.kappa) || !(params.kappa > 0.0)) {
        throw InvalidCoefficient("kappa", "kappa > 0");
    }
    if (!finite(params.theta) || !(params.theta > 0.0)) {
        throw InvalidCoefficient("theta", "theta > 0");
    }
    if (!finite(params.r) || !(params.r >= 0.0)) {
        throw InvalidCoefficient("r", "r >= 0");
    }
    if (!finite(params.q) || !(params.q >= 0.0)) {
        throw InvalidCoefficient("q", "q >= 0");
    }
    if (!finite(params.gamma) || !(params.gamma > 0.0)) {
        throw InvalidCoefficient("gamma", "gamma > 0");
    }
}

DerivedConstants derive_constants(const HestonParams& params) {
    validate(params);
    const double s2 = params.sigma * params.sigma;
    DerivedConstants c;
    c.n = kSpatialDimension;
    c.beta = 2.0 * params.kappa * params.theta / s2;
    c.mu = 2.0 * params.kappa / s2;
    c.a1 = params.kappa * params.rho / params.sigma - 0.5;
    c.b1 = params.r - params.q - params.kappa * params.theta * params.rho / params.sigma;
    c.nu0 = std::min(1.0, (1.0 - params.rho * params.rho) * s2);
    const double nb = c.n + c.beta;
    c.p = 2.0 * nb / (nb - 1.0);
    return c;
}

double weight_exponential(const HestonParams& params, const DerivedConstants& consts, Point z) {
    return std::exp(-params.gamma * std::abs(z.x) - consts.mu * z.y);
}

double weight(const HestonParams& params, const DerivedConstants& consts, Point z) {
    if (z.y < 0.0) {
        throw Error(Errc::DegenerateInput, "weight evaluated below the half-plane");
    }
    const double e = weight_exponential(params, consts, z);
    if (z.y == 0.0) {
        if (consts.beta < 1.0) {
            throw Error(Errc::DegenerateInput, "weight is unbounded at y = 0 for beta < 1");
        }
        return consts.beta == 1.0 ? e : 0.0;
    }
    return std::pow(z.y, consts.beta - 1.0) * e;
}

double principal_symbol(const HestonParams& params, double xi1, double xi2) {
    return 0.5 * (xi1 * xi1 + 2.0 * params.rho * params.sigma * xi1 * xi2 +
                  params.sigma * params.sigma * xi2 * xi2);
}

}  // namespace degenvi

#include "degenvi/quadrature.hpp"

#include "degenvi/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <utility>
#include <map>
#include <mutex>

namespace degenvi {

namespace {

// Golub-Welsch for the Jacobi weight (1 - t)^alpha (1 + t)^beta on [-1, 1].
Rule1D golub_welsch_jacobi(int n, double alpha, double beta) {
    const double ab = alpha + beta;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        double diag;
        if (k == 0) {
            diag = (beta - alpha) / (ab + 2.0);
        } else {
            const double s = 2.0 * k + ab;
            diag = (beta * beta - alpha * alpha) / (s * (s + 2.0));
        }
        J(k, k) = diag;
        if (k + 1 < n) {
            const int m = k + 1;
            const double s = 2.0 * m + ab;
            double b;
            if (m == 1) {
                b = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
            } else {
                b = 4.0 * m * (m + alpha) * (m + beta) * (m + ab) /
                    (s * s * (s + 1.0) * (s - 1.0));
            }
            J(k, k + 1) = J(k + 1, k) = std::sqrt(b);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                                std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
    Rule1D rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        rule.nodes[k] = es.eigenvalues()(k);
        const double v = es.eigenvectors()(0, k);
        rule.weights[k] = mu0 * v * v;
    }
    return rule;
}

// Legendre value and derivative at t by the three-term recurrence.
std::pair<double, double> legendre_eval(int n, double t) {
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    const double pn = n == 1 ? t : p1;
    const double pnm1 = n == 1 ? 1.0 : p0;
    return {pn, n * (t * pn - pnm1) / (t * t - 1.0)};
}

// Newton on P_n from the Tricomi initial guesses.
Rule1D legendre_newton(int n) {
    Rule1D rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [pn, dp] = legendre_eval(n, t);
            const double dt = pn / dp;
            t -= dt;
            if (std::abs(dt) < 1e-16) break;
        }
        const double dp = legendre_eval(n, t).second;
        rule.nodes[n - 1 - i] = 0.5 * (t + 1.0);
        rule.weights[n - 1 - i] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
    return rule;
}

}  // namespace

const Rule1D& gauss_legendre(int n) {
    static std::mutex mutex;
    static std::map<int, Rule1D> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        if (n < 1) throw Error(Errc::PreconditionViolated, "Gauss-Legendre needs n >= 1");
        it = cache.emplace(n, legendre_newton(n)).first;
    }
    return it->second;
}

Rule1D gauss_jacobi_unit(int n, double a) {
    if (!(a > -1.0)) throw Error(Errc::NonIntegrable, "y^a is not integrable at 0 for a <= -1");
    if (n < 1) throw Error(Errc::PreconditionViolated, "Gauss-Jacobi needs n >= 1");
    static std::mutex mutex;
    static std::map<std::pair<int, double>, Rule1D> cache;
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find({n, a});
        if (it != cache.end()) return it->second;
    }
    Rule1D rule = golub_welsch_jacobi(n, 0.0, a);
    const double scale = std::pow(0.5, a + 1.0);
    for (std::size_t k = 0; k < rule.size(); ++k) {
        rule.nodes[k] = 0.5 * (rule.nodes[k] + 1.0);
        rule.weights[k] *= scale;
    }
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(std::make_pair(n, a), rule);
    return rule;
}

Rule1D mapped_legendre(double x0, double x1, int n) {
    const Rule1D& ref = gauss_legendre(n);
    Rule1D rule;
    rule.nodes.resize(ref.size());
    rule.weights.resize(ref.size());
    const double h = x1 - x0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
        rule.nodes[k] = x0 + h * ref.nodes[k];
        rule.weights[k] = h * ref.weights[k];
    }
    return rule;
}

Rule1D weighted_y_rule(double y0, double y1, double a, int n) {
    if (!(y1 > y0) || y0 < 0.0) {
        throw Error(Errc::PreconditionViolated, "weighted_y_rule needs 0 <= y0 < y1");
    }
    if (a == 0.0) return mapped_legendre(y0, y1, n);
    Rule1D rule;
    if (y0 == 0.0) {
        const Rule1D unit = gauss_jacobi_unit(n, a);
        const double scale = std::pow(y1, a + 1.0);
        for (std::size_t k = 0; k < unit.size(); ++k) {
            rule.nodes.push_back(y1 * unit.nodes[k]);
            rule.weights.push_back(scale * unit.weights[k]);
        }
        return rule;
    }
    // Geometric pieces with ratio <= 1.5 keep y = 0 at least five
    // half-widths away from each piece, so y^a is analytic there.
    const int pieces = std::max(1, static_cast<int>(std::ceil(std::log(y1 / y0) / std::log(1.5))));
    const double ratio = std::pow(y1 / y0, 1.0 / pieces);
    double lo = y0;
    for (int p = 0; p < pieces; ++p) {
        const double hi = p + 1 == pieces ? y1 : lo * ratio;
        const Rule1D part = mapped_legendre(lo, hi, n + 3);
        for (std::size_t k = 0; k < part.size(); ++k) {
            rule.nodes.push_back(part.nodes[k]);
            rule.weights.push_back(part.weights[k] * std::pow(part.nodes[k], a));
        }
        lo = hi;
    }
    return rule;
}

double monomial_moment(double y0, double y1, double a, int k) {
    const double e = a + k + 1.0;
    return (std::pow(y1, e) - std::pow(y0, e)) / e;
}

}  // namespace degenvi

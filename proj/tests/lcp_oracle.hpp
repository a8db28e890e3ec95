#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>

namespace oracle {

struct LcpSolution {
    Eigen::VectorXd u;
    int matches = 0;  ///< active sets satisfying complementarity
};

/// Solves min(M u - b, u - psi) = 0 by trying every active set. Sets whose
/// feasibility test passes within tol are counted; the first one wins.
inline LcpSolution enumerate_lcp(const Eigen::MatrixXd& M, const Eigen::VectorXd& b, const Eigen::VectorXd& psi,
                                 double tol = 1e-12) {
    const int n = static_cast<int>(b.size());
    if (n > 16) throw std::invalid_argument("enumeration limited to 16 unknowns");
    LcpSolution out;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        Eigen::VectorXd u = psi;
        std::vector<int> free;
        for (int i = 0; i < n; ++i)
            if (!(mask & (1u << i))) free.push_back(i);
        if (!free.empty()) {
            const int m = static_cast<int>(free.size());
            Eigen::MatrixXd A(m, m);
            Eigen::VectorXd r(m);
            for (int a = 0; a < m; ++a) {
                r[a] = b[free[a]];
                for (int k = 0; k < n; ++k)
                    if (mask & (1u << k)) r[a] -= M(free[a], k) * psi[k];
                for (int c = 0; c < m; ++c) A(a, c) = M(free[a], free[c]);
            }
            const Eigen::VectorXd uf = A.fullPivLu().solve(r);
            for (int a = 0; a < m; ++a) u[free[a]] = uf[a];
        }
        const Eigen::VectorXd res = M * u - b;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            if (mask & (1u << i)) ok = res[i] >= -tol;
            else ok = u[i] - psi[i] >= -tol;
        }
        if (ok) {
            if (out.matches == 0) out.u = u;
            ++out.matches;
        }
    }
    return out;
}

}  // namespace oracle

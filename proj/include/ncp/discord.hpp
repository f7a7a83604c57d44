#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <tuple>
#include <vector>

#include "ncp/matrix.hpp"
#include "ncp/states.hpp"

namespace ncp {

// base-2 entropy; eigenvalues in [-1e-7, 0) are treated as numerical zeros
inline double von_neumann_entropy(const CMatrix& rho) {
    HermEig e = herm_eig(rho);
    double s = 0.0;
    for (double lam : e.values) {
        if (lam < -1e-7)
            throw std::invalid_argument("von_neumann_entropy: negative eigenvalue");
        if (lam <= 0.0) continue;
        s -= lam * std::log2(lam);
    }
    return s;
}

inline double mutual_information(const DensityMatrix& rho, std::size_t dA = 2,
                                 std::size_t dB = 2) {
    if (rho.d != dA * dB) throw DimensionError("mutual_information: dimension mismatch");
    double sa = von_neumann_entropy(partial_trace(rho.mat, dA, dB, Side::first));
    double sb = von_neumann_entropy(partial_trace(rho.mat, dA, dB, Side::second));
    return sa + sb - von_neumann_entropy(rho.mat);
}

struct MeasurementBasis {
    double theta = 0.0;
    double phi = 0.0;
    CMatrix proj0, proj1;
};

inline MeasurementBasis measurement_basis(double theta, double phi) {
    const cx eip(std::cos(phi), std::sin(phi));
    CMatrix v0(2, 1), v1(2, 1);
    v0(0, 0) = std::cos(theta);
    v0(1, 0) = eip * std::sin(theta);
    v1(0, 0) = std::sin(theta);
    v1(1, 0) = -eip * std::cos(theta);
    return {theta, phi, v0 * v0.adjoint(), v1 * v1.adjoint()};
}

// average entropy of the unmeasured side after a projective measurement on
// the side named by `measured`
inline double measured_conditional_entropy(const DensityMatrix& rho, double theta, double phi,
                                           Side measured = Side::second) {
    if (rho.d != 4) throw DimensionError("measured_conditional_entropy: need two qubits");
    MeasurementBasis mb = measurement_basis(theta, phi);
    const Side keep = (measured == Side::second) ? Side::first : Side::second;
    double total = 0.0;
    for (const CMatrix* p : {&mb.proj0, &mb.proj1}) {
        CMatrix lifted = (measured == Side::second) ? tensor(CMatrix::identity(2), *p)
                                                    : tensor(*p, CMatrix::identity(2));
        CMatrix sub = lifted * rho.mat * lifted;
        double prob = sub.trace().real();
        if (prob <= 1e-14) continue;
        CMatrix cond = partial_trace(sub, 2, 2, keep) * cx(1.0 / prob);
        total += prob * von_neumann_entropy(cond);
    }
    return total;
}

namespace detail {

// two-parameter Nelder-Mead; returns (x, y, f) at the best vertex
inline std::array<double, 3> nelder_mead2(const std::function<double(double, double)>& f,
                                          double x0, double y0, double step, int iters,
                                          double tol) {
    struct V {
        double x, y, f;
    };
    std::array<V, 3> s = {V{x0, y0, f(x0, y0)},
                          V{x0 + step, y0, f(x0 + step, y0)},
                          V{x0, y0 + step, f(x0, y0 + step)}};
    auto order = [&s] {
        std::sort(s.begin(), s.end(), [](const V& a, const V& b) { return a.f < b.f; });
    };
    order();
    for (int it = 0; it < iters; ++it) {
        if (s[2].f - s[0].f < tol) break;
        const double cx0 = 0.5 * (s[0].x + s[1].x), cy0 = 0.5 * (s[0].y + s[1].y);
        V refl{cx0 + (cx0 - s[2].x), cy0 + (cy0 - s[2].y), 0.0};
        refl.f = f(refl.x, refl.y);
        if (refl.f < s[0].f) {
            V exp{cx0 + 2.0 * (cx0 - s[2].x), cy0 + 2.0 * (cy0 - s[2].y), 0.0};
            exp.f = f(exp.x, exp.y);
            s[2] = (exp.f < refl.f) ? exp : refl;
        } else if (refl.f < s[1].f) {
            s[2] = refl;
        } else {
            V con{cx0 + 0.5 * (s[2].x - cx0), cy0 + 0.5 * (s[2].y - cy0), 0.0};
            con.f = f(con.x, con.y);
            if (con.f < s[2].f) {
                s[2] = con;
            } else {
                for (int i = 1; i < 3; ++i) {
                    s[i].x = s[0].x + 0.5 * (s[i].x - s[0].x);
                    s[i].y = s[0].y + 0.5 * (s[i].y - s[0].y);
                    s[i].f = f(s[i].x, s[i].y);
                }
            }
        }
        order();
    }
    return {s[0].x, s[0].y, s[0].f};
}

}  // namespace detail

struct DiscordResult {
    double value = 0.0;
    double theta = 0.0;
    double phi = 0.0;
};

// quantum discord with projective measurements on one side; grid seed plus a
// local simplex refinement. Ties on the grid resolve to the smallest angles.
inline DiscordResult discord(const DensityMatrix& rho, Side measured = Side::second,
                             std::size_t n_theta = 64, std::size_t n_phi = 128) {
    if (rho.d != 4) throw DimensionError("discord: need two qubits");
    const double s_meas = von_neumann_entropy(partial_trace(rho.mat, 2, 2, measured));
    const double s_joint = von_neumann_entropy(rho.mat);

    auto cond = [&](double t, double p) {
        return measured_conditional_entropy(rho, t, p, measured);
    };

    double best_t = 0.0, best_p = 0.0, best = cond(0.0, 0.0);
    for (std::size_t i = 0; i < n_theta; ++i) {
        const double t = (0.5 * M_PI) * double(i) / double(n_theta - 1);
        for (std::size_t j = 0; j < n_phi; ++j) {
            const double p = (2.0 * M_PI) * double(j) / double(n_phi);
            const double v = cond(t, p);
            if (v < best - 1e-15) {
                best = v;
                best_t = t;
                best_p = p;
            }
        }
    }
    auto refined = detail::nelder_mead2(cond, best_t, best_p, 0.02, 200, 1e-10);
    if (refined[2] < best) {
        best_t = refined[0];
        best_p = refined[1];
        best = refined[2];
    }
    return {s_meas - s_joint + best, best_t, best_p};
}

inline std::vector<std::tuple<double, double, double>> discord_landscape(
    const DensityMatrix& rho, Side measured = Side::second, std::size_t n_theta = 64,
    std::size_t n_phi = 128) {
    if (rho.d != 4) throw DimensionError("discord_landscape: need two qubits");
    const double s_meas = von_neumann_entropy(partial_trace(rho.mat, 2, 2, measured));
    const double s_joint = von_neumann_entropy(rho.mat);
    std::vector<std::tuple<double, double, double>> out;
    out.reserve(n_theta * n_phi);
    for (std::size_t i = 0; i < n_theta; ++i) {
        const double t = (0.5 * M_PI) * double(i) / double(n_theta - 1);
        for (std::size_t j = 0; j < n_phi; ++j) {
            const double p = (2.0 * M_PI) * double(j) / double(n_phi);
            out.emplace_back(t, p, s_meas - s_joint + measured_conditional_entropy(rho, t, p, measured));
        }
    }
    return out;
}

struct ZeroDiscordStructure {
    bool found = false;
    MeasurementBasis basis;
    double residual = 0.0;
};

// looks for a measurement basis on one side that leaves the correlations
// classical (discord numerically zero)
inline ZeroDiscordStructure zero_discord_structure(const DensityMatrix& rho,
                                                   Side measured = Side::second,
                                                   double tol = 1e-6) {
    DiscordResult r = discord(rho, measured);
    ZeroDiscordStructure z;
    z.residual = r.value;
    z.found = std::abs(r.value) < tol;
    z.basis = measurement_basis(r.theta, r.phi);
    return z;
}

}  // namespace ncp

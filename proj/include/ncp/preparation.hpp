#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ncp/channels.hpp"
#include "ncp/matrix.hpp"
#include "ncp/states.hpp"
#include "ncp/tomography.hpp"

namespace ncp {

enum class PrepKind { measure_rotate, measure_only };

struct PreparationFailed : std::runtime_error {
    double prob = 0.0;
    std::string target;
    PreparationFailed(double g, std::string t)
        : std::runtime_error("preparation failed for target " + t +
                             ": outcome probability " + std::to_string(g)),
          prob(g),
          target(std::move(t)) {}
};

struct Preparation {
    DensityMatrix state;  // product rho_target (x) tau
    DensityMatrix env;    // tau alone
    double prob = 0.0;    // Gamma, the heralding probability
};

// Both procedures start from the joint state gamma and post-select on a
// projective outcome on the system side. measure_rotate always projects onto
// H and then rotates the system to the target, so the environment ends in the
// same tau for every target. measure_only projects straight onto the target,
// so the environment can end up correlated with the choice of input.
inline Preparation prepare(const DensityMatrix& gamma, PrepKind kind, const CMatrix& target,
                           const std::string& label = "", double floor = 1e-10) {
    if (gamma.d != 4) throw DimensionError("prepare: need a two-qubit joint state");
    if (target.rows() != 2 || target.cols() != 2)
        throw DimensionError("prepare: target must be a qubit projector");
    const CMatrix proj = (kind == PrepKind::measure_rotate) ? named_state("H").mat : target;
    CMatrix sandwiched =
        tensor(proj, CMatrix::identity(2)) * gamma.mat * tensor(proj, CMatrix::identity(2));
    const double g = sandwiched.trace().real();
    if (g < floor) throw PreparationFailed(g, label);
    CMatrix tau = partial_trace(sandwiched, 2, 2, Side::second) * cx(1.0 / g);
    Preparation p{DensityMatrix(tensor(target, tau)), DensityMatrix(tau), g};
    return p;
}

// convex mixture of basis preparations, one weight per target
inline DensityMatrix prepare_mixed_random(const DensityMatrix& gamma,
                                          const std::vector<double>& weights,
                                          PrepKind kind,
                                          const std::vector<CMatrix>& targets) {
    if (weights.size() != targets.size())
        throw DimensionError("prepare_mixed_random: one weight per target");
    double wsum = 0.0;
    for (double w : weights) {
        if (w < -1e-12) throw std::invalid_argument("prepare_mixed_random: negative weight");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-9)
        throw std::invalid_argument("prepare_mixed_random: weights must sum to 1");
    CMatrix out(4, 4);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (weights[i] == 0.0) continue;
        out += prepare(gamma, kind, targets[i], "mixture component " + std::to_string(i)).state.mat *
               cx(weights[i]);
    }
    return DensityMatrix(out);
}

struct SqptExperiment {
    ProcessMatrix L;
    bool cp = false;
    std::vector<double> eigenvalues;
    std::vector<DensityMatrix> env_states;
    std::vector<double> probs;
};

// full correlated-input experiment: prepare each basis input from the shared
// joint state, evolve system+environment, tomograph the reduced outputs
inline SqptExperiment run_sqpt_experiment(const DensityMatrix& gamma0, const CMatrix& U,
                                          PrepKind kind) {
    TomographicBasis basis = TomographicBasis::standard_qubit();
    SqptExperiment ex;
    std::vector<DensityMatrix> outputs;
    for (std::size_t j = 0; j < basis.elements.size(); ++j) {
        Preparation p = prepare(gamma0, kind, basis.elements[j], basis.names[j]);
        ex.env_states.push_back(p.env);
        ex.probs.push_back(p.prob);
        outputs.push_back(system_env_evolve(p.state, U));
    }
    ex.L = sqpt(basis, outputs);
    CpReport r = is_cp(ex.L);
    ex.cp = r.cp;
    ex.eigenvalues = r.eigenvalues;
    return ex;
}

// d^3 x d^3 block matrix M^{(r,s)}_{r''r';s''s'} = tr([U]_{rr'} [g]_{r''s''} [U]^dag_{ss'})
// where [X]_{ij} is the environment-sized block of X at system indices (i, j).
// Row layout: outer block (r'', r'), inner entry r; columns likewise.
struct BilinearProcessMatrix {
    CMatrix mat;
    std::size_t d = 0;
};

namespace detail {

inline CMatrix system_block(const CMatrix& x, std::size_t d, std::size_t i, std::size_t j) {
    CMatrix b(d, d);
    for (std::size_t m = 0; m < d; ++m)
        for (std::size_t n = 0; n < d; ++n) b(m, n) = x(i * d + m, j * d + n);
    return b;
}

}  // namespace detail

inline BilinearProcessMatrix bilinear_matrix(const DensityMatrix& gamma0, const CMatrix& U,
                                             std::size_t d = 2) {
    if (gamma0.d != d * d || U.rows() != d * d || U.cols() != d * d)
        throw DimensionError("bilinear_matrix: dimension mismatch");
    BilinearProcessMatrix M{CMatrix(d * d * d, d * d * d), d};
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t rp = 0; rp < d; ++rp)
            for (std::size_t rpp = 0; rpp < d; ++rpp)
                for (std::size_t s = 0; s < d; ++s)
                    for (std::size_t sp = 0; sp < d; ++sp)
                        for (std::size_t spp = 0; spp < d; ++spp) {
                            CMatrix prod = detail::system_block(U, d, r, rp) *
                                           detail::system_block(gamma0.mat, d, rpp, spp) *
                                           detail::system_block(U, d, s, sp).adjoint();
                            M.mat((rpp * d + rp) * d + r, (spp * d + sp) * d + s) = prod.trace();
                        }
    return M;
}

// quadratic contraction Q_{rs} = sum P*_{r''r'} M^{(r,s)} P_{s''s'}, then
// normalization by Gamma = tr(Q); reproduces preparation by measurement
inline DensityMatrix bilinear_evolve(const BilinearProcessMatrix& M, const DensityMatrix& rho,
                                     double floor = 1e-10) {
    const std::size_t d = M.d;
    if (rho.d != d) throw DimensionError("bilinear_evolve: dimension mismatch");
    if (purity(rho) < 1.0 - 1e-8)
        throw std::invalid_argument("bilinear_evolve: preparation projector must be pure");
    CMatrix q(d, d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t s = 0; s < d; ++s) {
            cx acc = 0.0;
            for (std::size_t rp = 0; rp < d; ++rp)
                for (std::size_t rpp = 0; rpp < d; ++rpp)
                    for (std::size_t sp = 0; sp < d; ++sp)
                        for (std::size_t spp = 0; spp < d; ++spp)
                            acc += std::conj(rho.mat(rpp, rp)) *
                                   M.mat((rpp * d + rp) * d + r, (spp * d + sp) * d + s) *
                                   rho.mat(spp, sp);
            q(r, s) = acc;
        }
    const double g = q.trace().real();
    if (g <= floor) throw PreparationFailed(g, "bilinear contraction");
    return DensityMatrix(q * cx(1.0 / g));
}

}  // namespace ncp

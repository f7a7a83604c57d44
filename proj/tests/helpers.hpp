#pragma once

#include <random>

#include "ncp/matrix.hpp"

namespace ncp::testutil {

inline CMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = cx(g(rng), g(rng));
    return m;
}

inline CMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
    CMatrix m = random_matrix(rng, n, n);
    return (m + m.adjoint()) * cx(0.5);
}

inline CMatrix random_psd(std::mt19937_64& rng, std::size_t n) {
    CMatrix m = random_matrix(rng, n, n);
    return m * m.adjoint();
}

// Haar-like random unitary via Gram-Schmidt on a Gaussian matrix.
inline CMatrix random_unitary(std::mt19937_64& rng, std::size_t n) {
    CMatrix m = random_matrix(rng, n, n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t p = 0; p < c; ++p) {
            cx dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += std::conj(m(i, p)) * m(i, c);
            for (std::size_t i = 0; i < n; ++i) m(i, c) -= dot * m(i, p);
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) norm += std::norm(m(i, c));
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < n; ++i) m(i, c) /= norm;
    }
    return m;
}

inline CMatrix random_density(std::mt19937_64& rng, std::size_t n, int mix = 3) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMatrix rho(n, n);
    for (int k = 0; k < mix; ++k) {
        CMatrix v = random_matrix(rng, n, 1);
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) norm += std::norm(v(i, 0));
        rho += (v * v.adjoint()) * cx(1.0 / norm);
    }
    rho *= cx(1.0 / mix);
    return rho;
}

inline double max_diff(const CMatrix& a, const CMatrix& b) {
    return (a - b).max_abs();
}

}  // namespace ncp::testutil

#include "ncp/channels.hpp"

namespace ncp::testutil {

// Random trace-preserving channel: Gaussian Kraus ops renormalized by S^{-1/2}.
inline KrausSet random_tp_kraus(std::mt19937_64& rng, std::size_t d, int nops) {
    KrausSet k;
    for (int i = 0; i < nops; ++i) k.ops.push_back(random_matrix(rng, d, d));
    CMatrix s(d, d);
    for (const CMatrix& op : k.ops) s += op.adjoint() * op;
    CMatrix r = pseudo_inverse(matrix_sqrt(s), 1e-12);
    for (CMatrix& op : k.ops) op = op * r;
    return k;
}

}  // namespace ncp::testutil

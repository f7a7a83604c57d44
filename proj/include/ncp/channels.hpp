#pragma once

#include <utility>
#include <vector>

#include "ncp/matrix.hpp"
#include "ncp/states.hpp"

namespace ncp {

struct NotCompletelyPositive : std::runtime_error {
    std::vector<double> eigenvalues;
    explicit NotCompletelyPositive(std::vector<double> eigs)
        : std::runtime_error("process matrix is not completely positive"),
          eigenvalues(std::move(eigs)) {}
};

struct KrausSet {
    std::vector<CMatrix> ops;

    std::size_t dim() const { return ops.empty() ? 0 : ops.front().rows(); }

    double completeness_defect() const {
        if (ops.empty()) return 1.0;
        CMatrix s(dim(), dim());
        for (const CMatrix& k : ops) s += k.adjoint() * k;
        return (s - CMatrix::identity(dim())).max_abs();
    }
};

// Choi-style process matrix, ancilla slot first: Lambda = sum_ij E_ij (x) E(E_ij).
struct ProcessMatrix {
    CMatrix mat;
    std::size_t d = 0;

    ProcessMatrix() = default;
    ProcessMatrix(CMatrix m, std::size_t dim) : mat(std::move(m)), d(dim) {
        if (mat.rows() != d * d || mat.cols() != d * d)
            throw DimensionError("process matrix must be d^2 x d^2");
    }
};

// Acts on column-stacked density matrices: |E(rho)> = Phi |rho>.
struct Superoperator {
    CMatrix mat;
    std::size_t d = 0;

    Superoperator() = default;
    Superoperator(CMatrix m, std::size_t dim) : mat(std::move(m)), d(dim) {
        if (mat.rows() != d * d || mat.cols() != d * d)
            throw DimensionError("superoperator must be d^2 x d^2");
    }
};

inline DensityMatrix apply_kraus(const KrausSet& k, const DensityMatrix& rho) {
    if (k.dim() != rho.d) throw DimensionError("apply_kraus: dimension mismatch");
    CMatrix out(rho.d, rho.d);
    for (const CMatrix& op : k.ops) out += op * rho.mat * op.adjoint();
    return DensityMatrix(out);
}

inline DensityMatrix apply_process(const ProcessMatrix& L, const DensityMatrix& rho) {
    if (L.d != rho.d) throw DimensionError("apply_process: dimension mismatch");
    CMatrix prod = L.mat * tensor(rho.mat.transpose(), CMatrix::identity(L.d));
    return DensityMatrix(partial_trace(prod, L.d, L.d, Side::second));
}

inline DensityMatrix apply_superop(const Superoperator& S, const DensityMatrix& rho) {
    if (S.d != rho.d) throw DimensionError("apply_superop: dimension mismatch");
    return DensityMatrix(materialize(S.mat * vectorize(rho.mat), S.d, S.d));
}

inline CMatrix matrix_unit(std::size_t d, std::size_t i, std::size_t j) {
    CMatrix e(d, d);
    e(i, j) = 1.0;
    return e;
}

inline ProcessMatrix kraus_to_process(const KrausSet& k) {
    const std::size_t d = k.dim();
    CMatrix L(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            CMatrix eij = matrix_unit(d, i, j);
            CMatrix img(d, d);
            for (const CMatrix& op : k.ops) img += op * eij * op.adjoint();
            L += tensor(eij, img);
        }
    return ProcessMatrix(L, d);
}

inline Superoperator kraus_to_superop(const KrausSet& k) {
    const std::size_t d = k.dim();
    CMatrix S(d * d, d * d);
    for (const CMatrix& op : k.ops) S += tensor(op.conj(), op);
    return Superoperator(S, d);
}

// Choi <-> superoperator element rearrangement for the layouts used here:
// Lambda_{(i,a),(j,b)} = Phi_{(b,a),(j,i)}. The permutation is an involution.
inline CMatrix reshuffle(const CMatrix& m, std::size_t d) {
    if (m.rows() != d * d || m.cols() != d * d)
        throw DimensionError("reshuffle: matrix must be d^2 x d^2");
    CMatrix r(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t b = 0; b < d; ++b)
                    r(i * d + a, j * d + b) = m(b * d + a, j * d + i);
    return r;
}

inline ProcessMatrix superop_to_process(const Superoperator& S) {
    return ProcessMatrix(reshuffle(S.mat, S.d), S.d);
}

inline Superoperator process_to_superop(const ProcessMatrix& L) {
    return Superoperator(reshuffle(L.mat, L.d), L.d);
}

inline KrausSet process_to_kraus(const ProcessMatrix& L, double cutoff = 1e-9) {
    HermEig e = herm_eig(L.mat);
    if (e.values.back() < -cutoff) throw NotCompletelyPositive(e.values);
    KrausSet k;
    for (std::size_t n = 0; n < e.values.size(); ++n) {
        if (e.values[n] <= cutoff) continue;
        CMatrix col(L.d * L.d, 1);
        for (std::size_t i = 0; i < L.d * L.d; ++i) col(i, 0) = e.vectors(i, n);
        k.ops.push_back(materialize(col, L.d, L.d) * cx(std::sqrt(e.values[n])));
    }
    return k;
}

inline KrausSet superop_to_kraus(const Superoperator& S, double cutoff = 1e-9) {
    return process_to_kraus(superop_to_process(S), cutoff);
}

struct CpReport {
    bool cp = false;
    double min_eig = 0.0;
    std::vector<double> eigenvalues;
};

struct TpReport {
    bool tp = false;
    double defect = 0.0;
};

inline CpReport is_cp(const ProcessMatrix& L, double tol = 1e-9) {
    if (hermiticity_defect(L.mat) > 1e-8)
        throw std::invalid_argument("is_cp: process matrix is not Hermitian");
    HermEig e = herm_eig(L.mat);
    CpReport r;
    r.eigenvalues = e.values;
    r.min_eig = e.values.back();
    r.cp = r.min_eig >= -tol;
    return r;
}

// Trace preservation contracts the output (second) slot of the Choi layout.
inline TpReport is_tp(const ProcessMatrix& L, double tol = 1e-9) {
    CMatrix t = partial_trace(L.mat, L.d, L.d, Side::first);
    TpReport r;
    r.defect = (t - CMatrix::identity(L.d)).max_abs();
    r.tp = r.defect <= tol;
    return r;
}

inline DensityMatrix system_env_evolve(const DensityMatrix& rho_SE, const CMatrix& U,
                                       std::size_t dS = 2, std::size_t dE = 2) {
    if (rho_SE.d != dS * dE || U.rows() != dS * dE || U.cols() != dS * dE)
        throw DimensionError("system_env_evolve: dimension mismatch");
    if ((U * U.adjoint() - CMatrix::identity(dS * dE)).max_abs() > 1e-9)
        throw std::invalid_argument("system_env_evolve: U is not unitary");
    return DensityMatrix(partial_trace(U * rho_SE.mat * U.adjoint(), dS, dE, Side::first));
}

}  // namespace ncp

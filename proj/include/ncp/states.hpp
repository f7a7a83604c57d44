#pragma once

#include <array>
#include <cmath>
#include <random>
#include <string>

#include "ncp/matrix.hpp"

namespace ncp {

inline CMatrix pauli(int k) {
    const cx i(0.0, 1.0);
    switch (k) {
        case 0: return CMatrix::identity(2);
        case 1: return CMatrix(2, 2, {0, 1, 1, 0});
        case 2: return CMatrix(2, 2, {0, -i, i, 0});
        case 3: return CMatrix(2, 2, {1, 0, 0, -1});
        default: throw std::invalid_argument("pauli index out of range");
    }
}

struct BlochVector {
    double a1 = 0.0, a2 = 0.0, a3 = 0.0;
    double norm() const { return std::sqrt(a1 * a1 + a2 * a2 + a3 * a3); }
};

struct DensityMatrix {
    CMatrix mat;
    std::size_t d = 0;

    DensityMatrix() = default;
    explicit DensityMatrix(CMatrix m) : mat(std::move(m)), d(mat.rows()) {
        if (mat.rows() != mat.cols()) throw DimensionError("density matrix must be square");
    }
    operator const CMatrix&() const { return mat; }
};

// Polarization kets: H=|0>, V=|1>, D/A=(|0>+-|1>)/sqrt2, R/L=(|0>+-i|1>)/sqrt2.
inline CMatrix named_ket(const std::string& name) {
    const double s = 1.0 / std::sqrt(2.0);
    const cx i(0.0, 1.0);
    CMatrix v(2, 1);
    if (name == "H") {
        v(0, 0) = 1.0;
    } else if (name == "V") {
        v(1, 0) = 1.0;
    } else if (name == "D") {
        v(0, 0) = s; v(1, 0) = s;
    } else if (name == "A") {
        v(0, 0) = s; v(1, 0) = -s;
    } else if (name == "R") {
        v(0, 0) = s; v(1, 0) = i * s;
    } else if (name == "L") {
        v(0, 0) = s; v(1, 0) = -i * s;
    } else {
        throw std::invalid_argument("unknown state name: " + name);
    }
    return v;
}

inline DensityMatrix named_state(const std::string& name) {
    CMatrix v = named_ket(name);
    return DensityMatrix(v * v.adjoint());
}

inline DensityMatrix from_bloch(const BlochVector& b) {
    CMatrix m = CMatrix::identity(2);
    m += pauli(1) * cx(b.a1);
    m += pauli(2) * cx(b.a2);
    m += pauli(3) * cx(b.a3);
    m *= cx(0.5);
    return DensityMatrix(m);
}

inline BlochVector to_bloch(const DensityMatrix& rho) {
    if (rho.d != 2) throw DimensionError("to_bloch requires a qubit state");
    BlochVector b;
    b.a1 = (rho.mat * pauli(1)).trace().real();
    b.a2 = (rho.mat * pauli(2)).trace().real();
    b.a3 = (rho.mat * pauli(3)).trace().real();
    return b;
}

inline double purity(const DensityMatrix& rho) {
    return (rho.mat * rho.mat).trace().real();
}

struct ValidityReport {
    bool valid = false;
    double min_eig = 0.0;
    double trace_err = 0.0;
    double herm_err = 0.0;
};

inline ValidityReport validate(const DensityMatrix& rho, double tol = 1e-9) {
    ValidityReport r;
    r.herm_err = hermiticity_defect(rho.mat);
    r.trace_err = std::abs(rho.mat.trace() - cx(1.0));
    if (r.herm_err <= tolerances().hermiticity) {
        HermEig e = herm_eig(rho.mat);
        r.min_eig = e.values.back();
    } else {
        // symmetrize just to produce a report; state is invalid regardless
        HermEig e = herm_eig((rho.mat + rho.mat.adjoint()) * cx(0.5));
        r.min_eig = e.values.back();
    }
    r.valid = r.herm_err <= tol && r.trace_err <= tol && r.min_eig >= -tol;
    return r;
}

struct FanoForm {
    BlochVector alpha;  // first qubit
    BlochVector beta;   // second qubit
    std::array<std::array<double, 3>, 3> gamma{};  // correlation matrix
};

inline FanoForm fano(const DensityMatrix& rho) {
    if (rho.d != 4) throw DimensionError("fano requires a two-qubit state");
    FanoForm f;
    auto comp = [&](const CMatrix& op) { return (rho.mat * op).trace().real(); };
    f.alpha = {comp(tensor(pauli(1), pauli(0))), comp(tensor(pauli(2), pauli(0))),
               comp(tensor(pauli(3), pauli(0)))};
    f.beta = {comp(tensor(pauli(0), pauli(1))), comp(tensor(pauli(0), pauli(2))),
              comp(tensor(pauli(0), pauli(3)))};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            f.gamma[i][j] = comp(tensor(pauli(i + 1), pauli(j + 1)));
    return f;
}

inline DensityMatrix from_fano(const FanoForm& f) {
    CMatrix m = CMatrix::identity(4);
    const double a[3] = {f.alpha.a1, f.alpha.a2, f.alpha.a3};
    const double b[3] = {f.beta.a1, f.beta.a2, f.beta.a3};
    for (int i = 0; i < 3; ++i) {
        m += tensor(pauli(i + 1), pauli(0)) * cx(a[i]);
        m += tensor(pauli(0), pauli(i + 1)) * cx(b[i]);
        for (int j = 0; j < 3; ++j)
            m += tensor(pauli(i + 1), pauli(j + 1)) * cx(f.gamma[i][j]);
    }
    m *= cx(0.25);
    return DensityMatrix(m);
}

struct SchmidtDecomposition {
    std::vector<double> coeffs;   // non-negative, descending
    std::vector<CMatrix> basesA;  // column vectors
    std::vector<CMatrix> basesB;
    std::size_t schmidt_number = 0;
};

// Schmidt decomposition of a pure bipartite vector via the eigensystem of the
// reduced state on A; the B vectors follow by contracting psi with each A vector.
inline SchmidtDecomposition schmidt(const CMatrix& psi, std::size_t dA, std::size_t dB) {
    if (psi.rows() != dA * dB || psi.cols() != 1)
        throw DimensionError("schmidt: vector length must be dA*dB");
    double norm2 = 0.0;
    for (const cx& v : psi.data()) norm2 += std::norm(v);
    if (std::abs(norm2 - 1.0) > 1e-9)
        throw std::invalid_argument("schmidt: vector is not normalized");

    CMatrix rhoA = partial_trace(psi * psi.adjoint(), dA, dB, Side::first);
    HermEig e = herm_eig(rhoA);

    SchmidtDecomposition s;
    for (std::size_t k = 0; k < dA; ++k) {
        double lam2 = std::max(e.values[k], 0.0);
        double lam = std::sqrt(lam2);
        if (lam <= 1e-9) continue;
        CMatrix ua(dA, 1);
        for (std::size_t i = 0; i < dA; ++i) ua(i, 0) = e.vectors(i, k);
        CMatrix ub(dB, 1);
        for (std::size_t j = 0; j < dB; ++j) {
            cx v = 0.0;
            for (std::size_t i = 0; i < dA; ++i) v += std::conj(ua(i, 0)) * psi(i * dB + j, 0);
            ub(j, 0) = v / lam;
        }
        s.coeffs.push_back(lam);
        s.basesA.push_back(ua);
        s.basesB.push_back(ub);
    }
    s.schmidt_number = s.coeffs.size();
    return s;
}

struct TernoState {
    DensityMatrix state;
    bool valid = false;
    double bound = 0.0;  // largest |a| admissible for this alpha
};

// Two-qubit family rho = (I + sum_i alpha_i s_i(x)I + a sum_i s_i(x)s_i)/4.
inline TernoState terno_state(double a, const BlochVector& alpha) {
    CMatrix m = CMatrix::identity(4);
    const double al[3] = {alpha.a1, alpha.a2, alpha.a3};
    for (int i = 0; i < 3; ++i) {
        m += tensor(pauli(i + 1), pauli(0)) * cx(al[i]);
        m += tensor(pauli(i + 1), pauli(i + 1)) * cx(a);
    }
    m *= cx(0.25);
    TernoState t;
    t.state = DensityMatrix(m);
    const double n2 = alpha.a1 * alpha.a1 + alpha.a2 * alpha.a2 + alpha.a3 * alpha.a3;
    t.bound = (std::sqrt(std::max(4.0 - 3.0 * n2, 0.0)) - 1.0) / 3.0;
    t.valid = std::abs(a) <= t.bound + 1e-12;
    return t;
}

// Seeded Haar-like random states for property tests.
inline CMatrix random_pure_ket(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMatrix v(n, 1);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        v(i, 0) = cx(g(rng), g(rng));
        norm2 += std::norm(v(i, 0));
    }
    v *= cx(1.0 / std::sqrt(norm2));
    return v;
}

inline DensityMatrix random_mixed_state(std::mt19937_64& rng, std::size_t n, int mix = 3) {
    CMatrix rho(n, n);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    double wsum = 0.0;
    std::vector<double> w(mix);
    for (int k = 0; k < mix; ++k) {
        w[k] = u(rng);
        wsum += w[k];
    }
    for (int k = 0; k < mix; ++k) {
        CMatrix v = random_pure_ket(rng, n);
        rho += (v * v.adjoint()) * cx(w[k] / wsum);
    }
    return DensityMatrix(rho);
}

}  // namespace ncp

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ncp/channels.hpp"
#include "ncp/matrix.hpp"
#include "ncp/states.hpp"

namespace ncp {

struct NotFaithful : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TomographicBasis {
    std::vector<CMatrix> elements;  // d^2 states, doubling as measurement operators
    std::vector<std::string> names;

    std::size_t dim() const { return elements.empty() ? 0 : elements.front().rows(); }

    // The standard polarization quartet used throughout.
    static TomographicBasis standard_qubit() {
        TomographicBasis b;
        for (const char* n : {"H", "V", "D", "R"}) {
            b.elements.push_back(named_state(n).mat);
            b.names.emplace_back(n);
        }
        return b;
    }

    static TomographicBasis product(const TomographicBasis& x, const TomographicBasis& y) {
        TomographicBasis b;
        for (std::size_t i = 0; i < x.elements.size(); ++i)
            for (std::size_t j = 0; j < y.elements.size(); ++j) {
                b.elements.push_back(tensor(x.elements[i], y.elements[j]));
                b.names.push_back(x.names[i] + y.names[j]);
            }
        return b;
    }
};

struct DualBasis {
    std::vector<CMatrix> duals;
};

// D_j = mat(F^-1 |M_j>) where F = sum_i |M_i><M_i| over vectorized elements.
inline DualBasis dual_basis(const TomographicBasis& b) {
    const std::size_t d = b.dim();
    const std::size_t n = b.elements.size();
    CMatrix frame(d * d, d * d);
    for (const CMatrix& m : b.elements) {
        CMatrix v = vectorize(m);
        frame += v * v.adjoint();
    }
    HermEig e = herm_eig(frame);
    std::size_t rank = 0;
    for (double lam : e.values)
        if (lam > 1e-10) ++rank;
    if (rank < n)
        throw std::invalid_argument("dual_basis: basis elements are linearly dependent");
    CMatrix finv = pseudo_inverse(frame);
    DualBasis db;
    for (const CMatrix& m : b.elements)
        db.duals.push_back(materialize(finv * vectorize(m), d, d));
    return db;
}

inline DensityMatrix reconstruct_state(const std::vector<double>& probs, const DualBasis& db) {
    if (probs.size() != db.duals.size())
        throw DimensionError("reconstruct_state: probability count mismatch");
    const std::size_t d = db.duals.front().rows();
    CMatrix rho(d, d);
    for (std::size_t i = 0; i < probs.size(); ++i) rho += db.duals[i] * cx(probs[i]);
    return DensityMatrix(rho);
}

// Lambda = sum_j D_j^* (x) E(rho_j).
inline ProcessMatrix sqpt(const TomographicBasis& inputs,
                          const std::vector<DensityMatrix>& outputs) {
    if (outputs.size() != inputs.elements.size())
        throw DimensionError("sqpt: outputs count must match inputs");
    const std::size_t d = inputs.dim();
    DualBasis db = dual_basis(inputs);
    CMatrix L(d * d, d * d);
    for (std::size_t j = 0; j < outputs.size(); ++j)
        L += tensor(db.duals[j].conj(), outputs[j].mat);
    return ProcessMatrix(L, d);
}

struct CountRecord {
    std::string input_label;
    std::string measurement_label;
    double expected = 0.0;
    std::uint64_t sampled = 0;
    std::uint64_t shots = 0;
};

inline ProcessMatrix sqpt_from_counts(const std::vector<CountRecord>& counts,
                                      const TomographicBasis& inputs,
                                      const TomographicBasis& measurements) {
    const std::size_t d = inputs.dim();
    DualBasis din = dual_basis(inputs);
    DualBasis dm = dual_basis(measurements);
    CMatrix L(d * d, d * d);
    for (std::size_t j = 0; j < inputs.elements.size(); ++j) {
        for (std::size_t m = 0; m < measurements.elements.size(); ++m) {
            const CountRecord* rec = nullptr;
            for (const CountRecord& r : counts)
                if (r.input_label == inputs.names[j] &&
                    r.measurement_label == measurements.names[m]) {
                    rec = &r;
                    break;
                }
            if (!rec || rec->shots == 0)
                throw std::invalid_argument("sqpt_from_counts: missing counts for pair (" +
                                            inputs.names[j] + ", " + measurements.names[m] + ")");
            const double p = static_cast<double>(rec->sampled) / static_cast<double>(rec->shots);
            L += tensor(din.duals[j].conj(), dm.duals[m]) * cx(p);
        }
    }
    return ProcessMatrix(L, d);
}

inline double faithfulness(const DensityMatrix& rho_in, std::size_t dA = 2, std::size_t dB = 2) {
    return purity(DensityMatrix(partial_trace(rho_in.mat, dA, dB, Side::first)));
}

// Ancilla-assisted reconstruction from one joint input/output pair.
// For the maximally entangled input, Lambda = d * output; otherwise the pure
// input's materialized amplitude matrix is inverted (NotFaithful if singular).
inline ProcessMatrix aapt(const DensityMatrix& output_joint, const DensityMatrix& input) {
    const std::size_t d2 = input.d;
    std::size_t d = 0;
    while (d * d < d2) ++d;
    if (d * d != d2) throw DimensionError("aapt: input is not a bipartite square");

    HermEig e = herm_eig(input.mat);
    if (1.0 - e.values.front() > 1e-8)
        throw std::invalid_argument("aapt: input state must be pure");
    CMatrix psi(d2, 1);
    for (std::size_t i = 0; i < d2; ++i) psi(i, 0) = e.vectors(i, 0);

    // amplitude matrix M with M_{ji} = psi_{(i,j)}: column-stacking materialize
    CMatrix M = materialize(psi, d, d);
    CMatrix gram = M.adjoint() * M;
    HermEig ge = herm_eig(gram);
    if (ge.values.back() <= 1e-10)
        throw NotFaithful("aapt: input state is not faithful (amplitude matrix is singular)");
    // M^-1 = (M^dag M)^-1 M^dag
    CMatrix Minv = pseudo_inverse(gram) * M.adjoint();
    CMatrix B = tensor(Minv.transpose(), CMatrix::identity(d));
    return ProcessMatrix(B * output_joint.mat * B.adjoint(), d);
}

// Induced single-qubit map of the correlated-assignment family under the
// partial-swap style unitary U(theta); reported as (theta, min Choi eigenvalue).
inline CMatrix assignment_unitary(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return CMatrix(4, 4,
                   {1, 0, 0, 0,
                    0, c, s, 0,
                    0, -s, c, 0,
                    0, 0, 0, 1});
}

inline std::vector<std::pair<double, double>> terno_ncp_scan(
    double a, const BlochVector& alpha, std::vector<double> thetas) {
    if (!terno_state(a, alpha).valid)
        throw std::invalid_argument("terno_ncp_scan: (a, alpha) violates the validity bound");
    std::sort(thetas.begin(), thetas.end());
    TomographicBasis basis = TomographicBasis::standard_qubit();
    std::vector<std::pair<double, double>> out;
    for (double theta : thetas) {
        CMatrix U = assignment_unitary(theta);
        std::vector<DensityMatrix> outputs;
        for (const CMatrix& rho : basis.elements) {
            BlochVector b = to_bloch(DensityMatrix(rho));
            CMatrix joint = terno_state(a, b).state.mat;
            outputs.emplace_back(partial_trace(U * joint * U.adjoint(), 2, 2, Side::first));
        }
        ProcessMatrix L = sqpt(basis, outputs);
        out.emplace_back(theta, is_cp(L).min_eig);
    }
    return out;
}

}  // namespace ncp

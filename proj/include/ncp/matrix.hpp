#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ncp {

using cx = std::complex<double>;

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Central tolerance knobs; tests may tighten them per call via the explicit
// tolerance parameters most operations expose.
struct ToleranceConfig {
    double hermiticity = 1e-9;
    double psd_clamp = 1e-10;
    double equality = 1e-9;
};

inline ToleranceConfig& tolerances() {
    static ToleranceConfig cfg;
    return cfg;
}

// Dense row-major complex matrix. Everything in this library is <= 16x16,
// so simplicity and determinism win over performance tricks.
class CMatrix {
  public:
    CMatrix() : rows_(0), cols_(0) {}
    CMatrix(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c) {}
    CMatrix(std::size_t r, std::size_t c, std::initializer_list<cx> vals)
        : rows_(r), cols_(c), a_(vals) {
        if (a_.size() != r * c) throw DimensionError("initializer size mismatch");
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cx& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const cx& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    const std::vector<cx>& data() const { return a_; }
    std::vector<cx>& data() { return a_; }

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static CMatrix zero(std::size_t r, std::size_t c) { return CMatrix(r, c); }

    CMatrix transpose() const {
        CMatrix m(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
        return m;
    }
    CMatrix conj() const {
        CMatrix m(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = std::conj(a_[i]);
        return m;
    }
    CMatrix adjoint() const { return conj().transpose(); }

    cx trace() const {
        if (rows_ != cols_) throw DimensionError("trace of non-square matrix");
        cx t = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const cx& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    bool approx_equal(const CMatrix& o, double tol) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) return false;
        for (std::size_t i = 0; i < a_.size(); ++i)
            if (std::abs(a_[i] - o.a_[i]) > tol) return false;
        return true;
    }

    CMatrix& operator+=(const CMatrix& o) {
        check_same(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    CMatrix& operator-=(const CMatrix& o) {
        check_same(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    CMatrix& operator*=(cx s) {
        for (cx& v : a_) v *= s;
        return *this;
    }

  private:
    void check_same(const CMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw DimensionError("matrix shape mismatch");
    }

    std::size_t rows_, cols_;
    std::vector<cx> a_;
};

inline CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
inline CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
inline CMatrix operator*(CMatrix a, cx s) { return a *= s; }
inline CMatrix operator*(cx s, CMatrix a) { return a *= s; }
inline CMatrix operator*(CMatrix a, double s) { return a *= cx(s); }
inline CMatrix operator*(double s, CMatrix a) { return a *= cx(s); }

inline CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("matrix product shape mismatch");
    CMatrix m(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cx ark = a(r, k);
            if (ark == cx(0.0)) continue;
            for (std::size_t c = 0; c < b.cols(); ++c) m(r, c) += ark * b(k, c);
        }
    return m;
}

inline CMatrix tensor(const CMatrix& a, const CMatrix& b) {
    CMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ra = 0; ra < a.rows(); ++ra)
        for (std::size_t ca = 0; ca < a.cols(); ++ca) {
            const cx v = a(ra, ca);
            if (v == cx(0.0)) continue;
            for (std::size_t rb = 0; rb < b.rows(); ++rb)
                for (std::size_t cb = 0; cb < b.cols(); ++cb)
                    m(ra * b.rows() + rb, ca * b.cols() + cb) = v * b(rb, cb);
        }
    return m;
}

enum class Side { first, second };

// Contract one tensor factor of a (dA*dB)x(dA*dB) matrix.
// keep == Side::first traces out the second factor and vice versa.
inline CMatrix partial_trace(const CMatrix& m, std::size_t dA, std::size_t dB, Side keep) {
    if (m.rows() != dA * dB || m.cols() != dA * dB)
        throw DimensionError("partial_trace: dimensions do not factor the matrix");
    if (keep == Side::first) {
        CMatrix r(dA, dA);
        for (std::size_t i = 0; i < dA; ++i)
            for (std::size_t j = 0; j < dA; ++j) {
                cx s = 0.0;
                for (std::size_t k = 0; k < dB; ++k) s += m(i * dB + k, j * dB + k);
                r(i, j) = s;
            }
        return r;
    }
    CMatrix r(dB, dB);
    for (std::size_t i = 0; i < dB; ++i)
        for (std::size_t j = 0; j < dB; ++j) {
            cx s = 0.0;
            for (std::size_t k = 0; k < dA; ++k) s += m(k * dB + i, k * dB + j);
            r(i, j) = s;
        }
    return r;
}

// Column-stacking: [[a,b],[c,d]] -> [a,c,b,d]^T.
inline CMatrix vectorize(const CMatrix& m) {
    CMatrix v(m.rows() * m.cols(), 1);
    std::size_t k = 0;
    for (std::size_t c = 0; c < m.cols(); ++c)
        for (std::size_t r = 0; r < m.rows(); ++r) v(k++, 0) = m(r, c);
    return v;
}

inline CMatrix materialize(const CMatrix& v, std::size_t rows, std::size_t cols) {
    if (v.rows() * v.cols() != rows * cols)
        throw DimensionError("materialize: length mismatch");
    CMatrix m(rows, cols);
    std::size_t k = 0;
    for (std::size_t c = 0; c < cols; ++c)
        for (std::size_t r = 0; r < rows; ++r) m(r, c) = v.data()[k++];
    return m;
}

inline double hermiticity_defect(const CMatrix& m) {
    return (m - m.adjoint()).max_abs();
}

struct HermEig {
    std::vector<double> values;  // descending
    CMatrix vectors;             // orthonormal columns
};

// Cyclic Jacobi diagonalization for complex Hermitian matrices.
// Deterministic, accurate, and entirely adequate for <= 16x16 inputs.
inline HermEig herm_eig(const CMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("herm_eig: non-square input");
    if (hermiticity_defect(m) > tolerances().hermiticity)
        throw std::invalid_argument("herm_eig: input is not Hermitian");
    const std::size_t n = m.rows();
    CMatrix a = (m + m.adjoint()) * cx(0.5);  // symmetrize roundoff
    CMatrix v = CMatrix::identity(n);
    const double thresh = 1e-14 * std::max(m.max_abs(), 1e-300);

    for (int sweep = 0; sweep < 200; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cx apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= thresh) continue;
                rotated = true;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const cx phase = apq / r;  // e^{i phi}
                const double tau = (aqq - app) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cx sp = s * phase;

                // columns p, q of A and V: right-multiply by the rotation
                for (std::size_t i = 0; i < n; ++i) {
                    const cx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - std::conj(sp) * aiq;
                    a(i, q) = sp * aip + c * aiq;
                    const cx vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - std::conj(sp) * viq;
                    v(i, q) = sp * vip + c * viq;
                }
                // rows p, q: left-multiply by the adjoint rotation
                for (std::size_t j = 0; j < n; ++j) {
                    const cx apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj - sp * aqj;
                    a(q, j) = std::conj(sp) * apj + c * aqj;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = cx(a(p, p).real(), 0.0);
                a(q, q) = cx(a(q, q).real(), 0.0);
            }
        }
        if (!rotated) break;
    }

    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        return a(i, i).real() > a(j, j).real();
    });

    HermEig e;
    e.values.resize(n);
    e.vectors = CMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        e.values[k] = a(idx[k], idx[k]).real();
        for (std::size_t i = 0; i < n; ++i) e.vectors(i, k) = v(i, idx[k]);
    }
    return e;
}

inline CMatrix matrix_sqrt(const CMatrix& m) {
    HermEig e = herm_eig(m);
    const std::size_t n = m.rows();
    for (double& lam : e.values) {
        if (lam < -tolerances().psd_clamp)
            throw std::invalid_argument("matrix_sqrt: input is not positive semidefinite");
        if (lam < 0.0) lam = 0.0;
    }
    CMatrix r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = std::sqrt(e.values[k]);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                r(i, j) += s * e.vectors(i, k) * std::conj(e.vectors(j, k));
    }
    return r;
}

// Moore-Penrose inverse of a Hermitian matrix via eigendecomposition.
inline CMatrix pseudo_inverse(const CMatrix& m, double tol = 1e-10) {
    HermEig e = herm_eig(m);
    const std::size_t n = m.rows();
    CMatrix r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(e.values[k]) <= tol) continue;
        const double inv = 1.0 / e.values[k];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                r(i, j) += inv * e.vectors(i, k) * std::conj(e.vectors(j, k));
    }
    return r;
}

}  // namespace ncp

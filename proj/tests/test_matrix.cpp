#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "ncp/matrix.hpp"

using namespace ncp;
using ncp::testutil::max_diff;
using ncp::testutil::random_hermitian;
using ncp::testutil::random_matrix;
using ncp::testutil::random_psd;

namespace {
const cx I1(0.0, 1.0);

CMatrix sigma(int k) {
    switch (k) {
        case 1: return CMatrix(2, 2, {0, 1, 1, 0});
        case 2: return CMatrix(2, 2, {0, -I1, I1, 0});
        default: return CMatrix(2, 2, {1, 0, 0, -1});
    }
}

CMatrix bell_projector() {
    CMatrix v(4, 1);
    v(0, 0) = 1.0 / std::sqrt(2.0);
    v(3, 0) = 1.0 / std::sqrt(2.0);
    return v * v.adjoint();
}
}  // namespace

TEST_CASE("tensor product layout and identities") {
    CMatrix s1 = sigma(1);
    CMatrix id2 = CMatrix::identity(2);
    CMatrix t = tensor(s1, id2);
    // I2 blocks sit on the anti-diagonal block positions
    CMatrix expect(4, 4, {0, 0, 1, 0,
                          0, 0, 0, 1,
                          1, 0, 0, 0,
                          0, 1, 0, 0});
    REQUIRE(max_diff(t, expect) < 1e-15);

    std::mt19937_64 rng(11);
    for (int k = 0; k < 20; ++k) {
        CMatrix a = random_matrix(rng, 2, 2), b = random_matrix(rng, 2, 2);
        CMatrix c = random_matrix(rng, 2, 2), d = random_matrix(rng, 2, 2);
        REQUIRE(std::abs(tensor(a, b).trace() - a.trace() * b.trace()) < 1e-12);
        REQUIRE(max_diff(tensor(a, b) * tensor(c, d), tensor(a * c, b * d)) < 1e-12);
        // associativity, bilinearity, adjoint distribution
        REQUIRE(max_diff(tensor(tensor(a, b), c), tensor(a, tensor(b, c))) < 1e-12);
        REQUIRE(max_diff(tensor(a + c, b), tensor(a, b) + tensor(c, b)) < 1e-12);
        REQUIRE(max_diff(tensor(a, b).adjoint(), tensor(a.adjoint(), b.adjoint())) < 1e-12);
    }
}

TEST_CASE("partial trace") {
    std::mt19937_64 rng(22);
    for (int k = 0; k < 20; ++k) {
        CMatrix rho = random_matrix(rng, 2, 2);
        CMatrix tau = random_matrix(rng, 3, 3);
        CMatrix joint = tensor(rho, tau);
        REQUIRE(max_diff(partial_trace(joint, 2, 3, Side::first), rho * tau.trace()) < 1e-12);
        REQUIRE(max_diff(partial_trace(joint, 2, 3, Side::second), tau * rho.trace()) < 1e-12);
        // trace preservation
        REQUIRE(std::abs(partial_trace(joint, 2, 3, Side::first).trace() - joint.trace()) < 1e-12);
    }

    CMatrix half_id = CMatrix::identity(2) * cx(0.5);
    REQUIRE(max_diff(partial_trace(bell_projector(), 2, 2, Side::first), half_id) < 1e-12);

    CMatrix m = random_matrix(rng, 4, 4);
    m *= cx(1.0) / m.trace();
    CMatrix reduced = partial_trace(m, 2, 2, Side::second);
    REQUIRE(std::abs(reduced.trace() - cx(1.0)) < 1e-12);

    REQUIRE_THROWS_AS(partial_trace(CMatrix(3, 3), 2, 2, Side::first), DimensionError);
}

TEST_CASE("vectorization is column stacking") {
    CMatrix rho(2, 2, {cx(1), cx(2), cx(3), cx(4)});  // [[p11,p12],[p21,p22]]
    CMatrix v = vectorize(rho);
    REQUIRE(v(0, 0) == cx(1));  // p11
    REQUIRE(v(1, 0) == cx(3));  // p21
    REQUIRE(v(2, 0) == cx(2));  // p12
    REQUIRE(v(3, 0) == cx(4));  // p22
    REQUIRE(max_diff(materialize(v, 2, 2), rho) < 1e-15);

    std::mt19937_64 rng(33);
    for (int k = 0; k < 20; ++k) {
        CMatrix a = random_matrix(rng, 2, 2);
        CMatrix b = random_matrix(rng, 2, 2);
        CMatrix c = random_matrix(rng, 2, 2);
        // |ABC> = (C^T (x) A)|B>
        REQUIRE(max_diff(vectorize(a * b * c), tensor(c.transpose(), a) * vectorize(b)) < 1e-12);
        // <A|B> = tr(A^dag B)
        cx inner = 0.0;
        for (std::size_t i = 0; i < 4; ++i)
            inner += std::conj(vectorize(a).data()[i]) * vectorize(b).data()[i];
        REQUIRE(std::abs(inner - (a.adjoint() * b).trace()) < 1e-12);
    }

    REQUIRE_THROWS_AS(materialize(CMatrix(3, 1), 2, 2), DimensionError);
}

TEST_CASE("hermitian eigendecomposition") {
    HermEig e = herm_eig(sigma(3));
    REQUIRE(e.values[0] == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(e.values[1] == Catch::Approx(-1.0).margin(1e-12));

    HermEig b = herm_eig(bell_projector());
    REQUIRE(b.values[0] == Catch::Approx(1.0).margin(1e-12));
    for (int i = 1; i < 4; ++i) REQUIRE(std::abs(b.values[i]) < 1e-12);

    std::mt19937_64 rng(44);
    for (int k = 0; k < 50; ++k) {
        CMatrix m = random_hermitian(rng, 4);
        HermEig he = herm_eig(m);
        CMatrix recon(4, 4);
        for (std::size_t j = 0; j < 4; ++j) {
            CMatrix col(4, 1);
            for (std::size_t i = 0; i < 4; ++i) col(i, 0) = he.vectors(i, j);
            recon += (col * col.adjoint()) * cx(he.values[j]);
        }
        REQUIRE(max_diff(recon, m) < 1e-10);
        REQUIRE(max_diff(he.vectors.adjoint() * he.vectors, CMatrix::identity(4)) < 1e-10);
        // descending order
        for (std::size_t j = 0; j + 1 < 4; ++j) REQUIRE(he.values[j] >= he.values[j + 1]);
        // eigenvalue sum equals trace
        double sum = 0.0;
        for (double lam : he.values) sum += lam;
        REQUIRE(sum == Catch::Approx(m.trace().real()).margin(1e-10));
    }

    CMatrix nonherm(2, 2, {cx(0), cx(1), cx(0), cx(0)});
    REQUIRE_THROWS(herm_eig(nonherm));
}

TEST_CASE("matrix square root") {
    CMatrix d(2, 2, {4, 0, 0, 9});
    CMatrix expect(2, 2, {2, 0, 0, 3});
    REQUIRE(max_diff(matrix_sqrt(d), expect) < 1e-12);

    CMatrix halfI = CMatrix::identity(2) * cx(0.5);
    REQUIRE(max_diff(matrix_sqrt(halfI), CMatrix::identity(2) * cx(1.0 / std::sqrt(2.0))) < 1e-12);

    std::mt19937_64 rng(55);
    for (int k = 0; k < 30; ++k) {
        CMatrix p = random_psd(rng, 4);
        CMatrix r = matrix_sqrt(p);
        REQUIRE(max_diff(r * r, p) < 1e-9 * std::max(1.0, p.max_abs()));
        REQUIRE(hermiticity_defect(r) < 1e-10);
    }

    CMatrix neg(2, 2, {-1, 0, 0, 1});
    REQUIRE_THROWS(matrix_sqrt(neg));
}

TEST_CASE("pseudo inverse") {
    std::mt19937_64 rng(66);
    for (int k = 0; k < 20; ++k) {
        CMatrix m = random_hermitian(rng, 4);
        CMatrix pinv = pseudo_inverse(m);
        REQUIRE(max_diff(m * pinv * m, m) < 1e-8);
        REQUIRE(max_diff(pinv * m * pinv, pinv) < 1e-8);
        REQUIRE(hermiticity_defect(m * pinv) < 1e-9);
        REQUIRE(hermiticity_defect(pinv * m) < 1e-9);
        // full-rank double inverse
        REQUIRE(max_diff(pseudo_inverse(pinv), m) < 1e-8 * std::max(1.0, m.max_abs()));
    }

    CMatrix rank_def(2, 2, {1, 0, 0, 0});
    REQUIRE(max_diff(pseudo_inverse(rank_def), rank_def) < 1e-12);

    // Gram matrix of the vectorized {H,V,D,R} measurement set and its inverse.
    CMatrix frame = CMatrix(4, 4,
        {6.0, cx(1, -1), cx(1, 1), 2.0,
         cx(1, 1), 2.0, 0.0, cx(1, 1),
         cx(1, -1), 0.0, 2.0, cx(1, -1),
         2.0, cx(1, -1), cx(1, 1), 6.0}) * cx(0.25);
    CMatrix frame_inv = CMatrix(4, 4,
        {2.0, cx(-1, 1), cx(-1, -1), 0.0,
         cx(-1, -1), 6.0, cx(0, 2), cx(-1, -1),
         cx(-1, 1), cx(0, -2), 6.0, cx(-1, 1),
         0.0, cx(-1, 1), cx(-1, -1), 2.0}) * cx(0.5);
    REQUIRE(max_diff(pseudo_inverse(frame), frame_inv) < 1e-9);
}

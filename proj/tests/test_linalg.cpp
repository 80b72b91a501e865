#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dissim/linalg.hpp"
#include "dissim/pauli.hpp"

using namespace dissim;

namespace {

std::mt19937_64 g_rng(2024);

Matrix random_matrix(Eigen::Index d) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            m(i, j) = Complex(gauss(g_rng), gauss(g_rng));
    return m;
}

Matrix random_unitary(Eigen::Index d) {
    Eigen::HouseholderQR<Matrix> qr(random_matrix(d));
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < d; ++i) {
        const Complex diag = r(i, i);
        if (std::abs(diag) > 0) q.col(i) *= diag / std::abs(diag);
    }
    return q;
}

Vector random_state(Eigen::Index d) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = Complex(gauss(g_rng), gauss(g_rng));
    v.normalize();
    return v;
}

Matrix random_density(Eigen::Index d) {
    const Matrix a = random_matrix(d);
    Matrix rho = a * a.adjoint();
    rho /= rho.trace();
    return rho;
}

KrausChannel random_channel(Eigen::Index d, int kraus) {
    // Slice a Stinespring unitary on d * padded(kraus) dims.
    Eigen::Index env = 1;
    while (env < kraus) env *= 2;
    const Matrix u = random_unitary(d * env);
    KrausChannel c;
    for (Eigen::Index i = 0; i < env; ++i) {
        c.ops.push_back(u.block(i * d, 0, d, d));
    }
    return c;
}

}  // namespace

TEST_CASE("kron matches index arithmetic") {
    const Matrix a = random_matrix(3);
    const Matrix b = random_matrix(2);
    const Matrix k = kron(a, b);
    REQUIRE(k.rows() == 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(std::abs(k(i, j) - a(i / 2, j / 2) * b(i % 2, j % 2)) == 0.0);
}

TEST_CASE("vectorize is row-major and matrixize inverts it") {
    Matrix o(2, 2);
    o << Complex(1, 0), Complex(2, 0), Complex(3, 0), Complex(4, 0);
    const Vector v = vectorize(o);
    CHECK(v(0) == Complex(1, 0));
    CHECK(v(1) == Complex(2, 0));
    CHECK(v(2) == Complex(3, 0));
    CHECK(v(3) == Complex(4, 0));
    CHECK((matrixize(v) - o).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("superop_of_map reproduces A O B^dag") {
    const Matrix a = random_matrix(4), b = random_matrix(4), o = random_matrix(4);
    const std::vector<Matrix> as = {a}, bs = {b};
    const Matrix s = superop_of_map(as, bs);
    const Vector lhs = s * vectorize(o);
    const Vector rhs = vectorize(a * o * b.adjoint());
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("expm against diagonalizable oracle") {
    // Hermitian argument: compare with the spectral exponential.
    const Matrix a = random_matrix(6);
    const Matrix h = (a + a.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Matrix diag = Matrix::Zero(6, 6);
    for (int i = 0; i < 6; ++i) diag(i, i) = std::exp(es.eigenvalues()(i));
    const Matrix viaspec =
        es.eigenvectors() * diag * es.eigenvectors().adjoint();
    const double scale = viaspec.cwiseAbs().maxCoeff();
    CHECK((expm(h) - viaspec).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    // expm(0) = I, expm of commuting sums multiply.
    CHECK((expm(Matrix::Zero(3, 3)) - identity(3)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("apply_channel preserves density matrices") {
    const KrausChannel c = random_channel(4, 3);
    CHECK(c.cptp_residual() <= 1e-12);
    const Matrix rho = random_density(4);
    const Matrix out = apply_channel(c, rho);
    CHECK(is_density_matrix(out));
    // Superoperator route agrees.
    const Vector via = c.superoperator() * vectorize(rho);
    CHECK((matrixize(via) - out).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("choi state equals choi of superoperator") {
    const KrausChannel c = random_channel(4, 2);
    const Matrix direct = choi_state(c);
    const Matrix via = choi_of_superop(c.superoperator());
    CHECK((direct - via).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(is_density_matrix(direct));
}

TEST_CASE("choi trace distance separates channels and vanishes on equals") {
    const KrausChannel c1 = random_channel(2, 2);
    const KrausChannel c2 = random_channel(2, 2);
    CHECK(choi_trace_distance(c1, c1) <= 1e-12);
    CHECK(choi_trace_distance(c1, c2) >= 0.0);
    // Unitary vs orthogonal-unitary channel: choi distance is positive.
    KrausChannel id, x;
    id.ops = {identity(2)};
    x.ops = {PauliString::parse("X").to_dense()};
    CHECK(choi_trace_distance(id, x) > 1.0);
}

TEST_CASE("partial trace against the two-qubit oracle") {
    const Matrix a = random_density(2), b = random_density(2);
    const Matrix rho = kron(a, b);
    CHECK((partial_trace(rho, 2, {0}) - a).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((partial_trace(rho, 2, {1}) - b).cwiseAbs().maxCoeff() <= 1e-12);
    // Keeping everything is the identity.
    CHECK((partial_trace(rho, 2, {0, 1}) - rho).cwiseAbs().maxCoeff() == 0.0);
    // Mixed entangled case: trace of a Bell projector is maximally mixed.
    Vector bell = Vector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const Matrix bp = bell * bell.adjoint();
    CHECK((partial_trace(bp, 2, {1}) - identity(2) / 2.0).cwiseAbs().maxCoeff() <=
          1e-12);
}

TEST_CASE("stinespring isometry reproduces the channel") {
    const KrausChannel c = random_channel(2, 3);
    const Matrix v = stinespring_isometry(c);
    CHECK((v.adjoint() * v - identity(2)).cwiseAbs().maxCoeff() <= 1e-10);
    const Matrix rho = random_density(2);
    const Matrix big = v * rho * v.adjoint();
    // Trace out the environment (most significant): keep the last qubit.
    const Matrix out = partial_trace(big, 3, {2});
    CHECK((out - apply_channel(c, rho)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("embed_gate places factors with qubit 0 most significant") {
    const Matrix x = PauliString::parse("X").to_dense();
    const Matrix z = PauliString::parse("Z").to_dense();
    CHECK((embed_gate(x, {0}, 2) - kron(x, identity(2))).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK((embed_gate(x, {1}, 2) - kron(identity(2), x)).cwiseAbs().maxCoeff() ==
          0.0);
    // Two-qubit gate on swapped positions.
    Matrix cnot(4, 4);
    cnot << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0;
    const Matrix on01 = embed_gate(cnot, {0, 1}, 2);
    CHECK((on01 - cnot).cwiseAbs().maxCoeff() == 0.0);
    const Matrix on10 = embed_gate(cnot, {1, 0}, 2);
    // Control on qubit 1, target qubit 0: |ab> -> |a^b, b>.
    Matrix expect = Matrix::Zero(4, 4);
    expect(0, 0) = expect(3, 1) = expect(2, 2) = expect(1, 3) = 1;
    CHECK((on10 - expect).cwiseAbs().maxCoeff() == 0.0);
    // Random three-qubit consistency with kron of the pieces.
    const Matrix u = random_unitary(2);
    CHECK((embed_gate(u, {1}, 3) - kron(kron(identity(2), u), identity(2)))
              .cwiseAbs()
              .maxCoeff() <= 1e-14);
}

TEST_CASE("apply_gate_inplace equals dense embedding") {
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + int(g_rng() % 3);
        const Eigen::Index d = Eigen::Index{1} << n;
        const int width = 1 + int(g_rng() % 2);
        std::vector<int> qubits;
        while (static_cast<int>(qubits.size()) < width) {
            const int q = int(g_rng() % n);
            if (std::find(qubits.begin(), qubits.end(), q) == qubits.end())
                qubits.push_back(q);
        }
        const Matrix u = random_unitary(Eigen::Index{1} << width);
        Vector psi = random_state(d);
        Vector direct = embed_gate(u, qubits, n) * psi;
        apply_gate_inplace(psi, n, u, qubits);
        CHECK((psi - direct).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("unitary_from_state completes deterministically") {
    for (Eigen::Index d : {2, 4, 8, 16}) {
        const Vector v = random_state(d);
        const Matrix u = unitary_from_state(v);
        CHECK(is_unitary(u));
        CHECK((u.col(0) - v).cwiseAbs().maxCoeff() <= 1e-12);
        const Matrix u2 = unitary_from_state(v);
        CHECK((u - u2).cwiseAbs().maxCoeff() == 0.0);
    }
    // Basis state completes to the identity up to column choice.
    const Matrix e = unitary_from_state(Vector::Unit(4, 0));
    CHECK((e.col(0) - Vector::Unit(4, 0)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("is_density_matrix rejects bad inputs") {
    CHECK(is_density_matrix(identity(4) / 4.0));
    CHECK(!is_density_matrix(identity(4)));            // trace 4
    Matrix m = identity(2);
    m(0, 1) = Complex(0.0, 0.3);                       // not Hermitian
    CHECK(!is_density_matrix(m / m.trace().real()));
    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK(!is_density_matrix(neg));                    // negative eigenvalue
}

TEST_CASE("dense ceiling guard") {
    CHECK_NOTHROW(check_dense_ceiling(4096));
    CHECK_THROWS(check_dense_ceiling(4097));
    CHECK_NOTHROW(check_dense_ceiling(8192, 8192));
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "dissim/estimation.hpp"

using namespace dissim;

namespace {

std::mt19937_64 g_rng(1618);

Vector random_state(Eigen::Index d) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = Complex(gauss(g_rng), gauss(g_rng));
    v.normalize();
    return v;
}

Matrix random_unitary(Eigen::Index d) {
    Matrix m(d, d);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            m(i, j) = Complex(gauss(g_rng), gauss(g_rng));
    Eigen::HouseholderQR<Matrix> qr(m);
    return Matrix(qr.householderQ());
}

}  // namespace

TEST_CASE("grover operator is unitary with the expected eigenphases") {
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix u1 = random_unitary(8);
        const Matrix u2 = random_unitary(8);
        const Matrix g = grover_operator(u1, u2);
        CHECK(is_unitary(g));
        // Product of two reflections: in the rotation subspace the
        // eigenvalues are exp(+-2 i phi) with cos(phi) = |<0|u1^dag u2|0>|.
        const double a = std::abs((u1.col(0).adjoint() * u2.col(0))(0, 0));
        Eigen::ComplexEigenSolver<Matrix> es(g);
        double best = 1e9;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            const double phase = std::abs(std::arg(es.eigenvalues()(i)));
            best = std::min(best, std::abs(std::cos(phase / 2.0) - a));
        }
        CHECK(best <= 1e-9);
    }
}

TEST_CASE("projector block unitary is unitary and swaps on the complement") {
    const Vector psi = random_state(4);
    const Matrix pi = psi * psi.adjoint();
    const Matrix u = projector_block_unitary(pi);
    REQUIRE(u.rows() == 8);
    CHECK(is_unitary(u));
    CHECK((u.topLeftCorner(4, 4) - pi).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((u.topRightCorner(4, 4) - (identity(4) - pi)).cwiseAbs().maxCoeff() <=
          1e-12);
}

TEST_CASE("hadamard-test embedding realizes the real and imaginary parts") {
    for (int trial = 0; trial < 20; ++trial) {
        const Vector s1 = random_state(8);
        const Vector s2 = random_state(8);
        const Complex overlap = (s1.adjoint() * s2)(0, 0);
        const AmplitudeProblem re =
            hadamard_test_embed(s1, s2, false, 0.01, 0.05);
        CHECK(2.0 * re.truth() - 1.0 ==
              doctest::Approx(overlap.real()).epsilon(1e-12));
        const AmplitudeProblem im = hadamard_test_embed(s1, s2, true, 0.01, 0.05);
        CHECK(2.0 * im.truth() - 1.0 ==
              doctest::Approx(overlap.imag()).epsilon(1e-12));
    }
}

TEST_CASE("problem construction from unitaries uses the first columns") {
    const Matrix u1 = random_unitary(4);
    const Matrix u2 = random_unitary(4);
    const AmplitudeProblem p = AmplitudeProblem::from_unitaries(u1, u2, 0.01, 0.05);
    CHECK(p.truth() ==
          doctest::Approx(std::abs((u1.col(0).adjoint() * u2.col(0))(0, 0)))
              .epsilon(1e-12));
}

TEST_CASE("likelihood estimation hits its accuracy target") {
    std::mt19937_64 rng(9);
    int hits = 0;
    const int trials = 40;
    for (int trial = 0; trial < trials; ++trial) {
        AmplitudeProblem p;
        p.s1 = random_state(4);
        p.s2 = random_state(4);
        p.epsilon = 0.01;
        p.delta = 0.05;
        const EstimateReport r = mlae_estimate(p, rng());
        if (std::abs(r.estimate - p.truth()) <= p.epsilon) ++hits;
        CHECK(r.queries > 0);
    }
    // 1 - delta = 95% success probability; demand at least 85% over 40 draws.
    CHECK(hits >= 34);
}

TEST_CASE("likelihood estimation handles boundary amplitudes") {
    AmplitudeProblem zero;
    zero.s1 = Vector::Unit(4, 0);
    zero.s2 = Vector::Unit(4, 1);  // orthogonal: amplitude 0
    zero.epsilon = 0.01;
    const EstimateReport r0 = mlae_estimate(zero, 5);
    CHECK(std::abs(r0.estimate) <= 0.02);

    AmplitudeProblem one;
    one.s1 = Vector::Unit(4, 2);
    one.s2 = one.s1;  // amplitude exactly 1
    one.epsilon = 0.01;
    const EstimateReport r1 = mlae_estimate(one, 5);
    CHECK(std::abs(r1.estimate - 1.0) <= 0.02);
}

TEST_CASE("likelihood estimation is deterministic in the seed") {
    AmplitudeProblem p;
    p.s1 = random_state(4);
    p.s2 = random_state(4);
    p.epsilon = 0.02;
    const EstimateReport a = mlae_estimate(p, 1234);
    const EstimateReport b = mlae_estimate(p, 1234);
    CHECK(a.estimate == b.estimate);
    CHECK(a.queries == b.queries);
    CHECK(a.powers == b.powers);
}

TEST_CASE("query count grows near-linearly in inverse accuracy") {
    AmplitudeProblem p;
    p.s1 = random_state(4);
    p.s2 = random_state(4);
    std::vector<double> eps = {0.1, 0.03, 0.01};
    std::vector<double> qs;
    for (double e : eps) {
        p.epsilon = e;
        qs.push_back(double(mlae_estimate(p, 17).queries));
    }
    // Least-squares slope of log q against log(1/eps).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double x = std::log(1.0 / eps[i]);
        const double y = std::log(qs[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double n = double(eps.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope >= 0.8);
    CHECK(slope <= 1.2);
}

TEST_CASE("direct sampling is unbiased, exact at the corners, deterministic") {
    CHECK(shot_estimate(1.0, 100, 3) == 1.0);
    CHECK(shot_estimate(-1.0, 100, 3) == -1.0);
    CHECK(std::abs(shot_estimate(0.0, 1000000, 3)) <= 0.004);
    CHECK(shot_estimate(0.37, 200000, 11) == shot_estimate(0.37, 200000, 11));
    // Mean over many seeds converges to x (standard-quantum-limit behavior).
    double mean = 0.0;
    const int reps = 200;
    for (int s = 0; s < reps; ++s) mean += shot_estimate(0.4, 2000, std::uint64_t(s));
    mean /= double(reps);
    CHECK(std::abs(mean - 0.4) <= 0.005);
    CHECK_THROWS(shot_estimate(0.2, 0, 1));
}

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dissim/lindblad.hpp"

using namespace dissim;

namespace {

std::mt19937_64 g_rng(99);

// Independent direct-arithmetic oracle for the smallest admissible order.
int order_oracle(double T, double eps) {
    double term = 2.0 * T;  // 2 T^{K+1}/(K+1)! at K = 0
    int k = 0;
    while (term > eps) {
        ++k;
        term *= T / double(k + 1);
        if (k > 10000) break;
    }
    return k;
}

DissipativeLindbladSpec random_pauli_spec(int n, int jumps, int blocks = 1) {
    DissipativeLindbladSpec spec;
    spec.num_qubits = n;
    std::uniform_real_distribution<double> rate(0.1, 1.0);
    const char letters[4] = {'I', 'X', 'Y', 'Z'};
    for (int j = 0; j < jumps; ++j) {
        std::vector<PauliString> bs;
        for (int b = 0; b < blocks; ++b) {
            std::string text = "+";
            for (int q = 0; q < n; ++q) text += letters[g_rng() % 4];
            bs.push_back(PauliString::parse(text));
        }
        spec.jumps.push_back({rate(g_rng), BlockDiagPauli(std::move(bs))});
    }
    return spec;
}

Matrix random_density(Eigen::Index d) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            a(i, j) = Complex(gauss(g_rng), gauss(g_rng));
    Matrix rho = a * a.adjoint();
    rho /= rho.trace();
    return rho;
}

Vector random_state(Eigen::Index d) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = Complex(gauss(g_rng), gauss(g_rng));
    v.normalize();
    return v;
}

}  // namespace

TEST_CASE("truncation order matches the direct-arithmetic oracle") {
    // Known fixed point: T = 1, eps = 1e-6 needs K = 9.
    CHECK(truncation_order(1.0, 1e-6) == 9);
    CHECK(order_oracle(1.0, 1e-6) == 9);
    for (double T : {0.05, 0.31, 0.77, 1.3, 2.9, 7.1, 19.0}) {
        for (double eps : {3e-2, 1e-3, 1e-5, 1e-8, 1e-11}) {
            CHECK(truncation_order(T, eps) == order_oracle(T, eps));
        }
    }
    // Monotone in both arguments.
    CHECK(truncation_order(2.0, 1e-6) >= truncation_order(1.0, 1e-6));
    CHECK(truncation_order(1.0, 1e-8) >= truncation_order(1.0, 1e-6));
}

TEST_CASE("truncation plan bound and normalization") {
    const TruncationPlan plan = make_truncation_plan(0.8, 1e-5);
    CHECK(plan.bound() <= 1e-5);
    CHECK(plan.K == truncation_order(0.8, 1e-5));
    // C^2 is the inverse truncated-Poisson mass, so C >= 1.
    CHECK(plan.C >= 1.0);
    double mass = 0.0, term = std::exp(-plan.T);
    for (int k = 0; k <= plan.K; ++k) {
        mass += term;
        term *= plan.T / double(k + 1);
    }
    CHECK(plan.C * plan.C * mass == doctest::Approx(1.0).epsilon(1e-12));

    const TruncationPlan forced = forced_truncation_plan(0.8, 3);
    CHECK(forced.K == 3);
    CHECK(forced.T == 0.8);
}

TEST_CASE("single dephasing jump decays coherences like exp(-2 g t)") {
    // L[rho] = g (Z rho Z - rho): off-diagonals of a qubit decay at rate 2g.
    DissipativeLindbladSpec spec;
    spec.num_qubits = 1;
    spec.jumps.push_back({0.7, BlockDiagPauli({PauliString::parse("+Z")})});
    spec.validate();
    Matrix plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    for (double t : {0.1, 0.5, 2.0}) {
        const Matrix rho = exact_evolution(spec, plus, t);
        CHECK(rho(0, 0).real() == doctest::Approx(0.5).epsilon(1e-10));
        CHECK(rho(0, 1).real() ==
              doctest::Approx(0.5 * std::exp(-2.0 * 0.7 * t)).epsilon(1e-10));
    }
}

TEST_CASE("taylor channel approaches the exact evolution within its bound") {
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 1 + int(g_rng() % 2);
        DissipativeLindbladSpec spec = random_pauli_spec(n, 2 + int(g_rng() % 3));
        spec.validate();
        const double t = 0.2 + 0.2 * double(g_rng() % 5);
        const double eps = 1e-6;
        const TruncationPlan plan =
            make_truncation_plan(spec.lindblad_norm() * t, eps);
        const Matrix rho0 = random_density(spec.dim());
        const Matrix exact = exact_evolution(spec, rho0, t);
        const Matrix approx = apply_taylor_channel(spec, plan, rho0);
        // Trace distance on states is bounded by half the diamond distance.
        CHECK(trace_norm_hermitian(exact - approx) <= eps);
    }
}

TEST_CASE("apply_taylor_channel matches the assembled superoperator") {
    DissipativeLindbladSpec spec = random_pauli_spec(2, 3);
    const TruncationPlan plan = make_truncation_plan(spec.lindblad_norm() * 0.9, 1e-8);
    const Matrix s = taylor_superoperator(spec, plan);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix rho = random_density(4);
        const Matrix via = matrixize(s * vectorize(rho));
        const Matrix direct = apply_taylor_channel(spec, plan, rho);
        CHECK((via - direct).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("build_taylor_channel is CPTP and matches the superoperator") {
    DissipativeLindbladSpec spec = random_pauli_spec(1, 2);
    const double t = 0.6;
    const KrausChannel c = build_taylor_channel(spec, t, 1e-6);
    CHECK(c.cptp_residual() <= 1e-9);
    const TruncationPlan plan = make_truncation_plan(spec.lindblad_norm() * t, 1e-6);
    CHECK((c.superoperator() - taylor_superoperator(spec, plan))
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
}

TEST_CASE("build_taylor_channel refuses past the enumeration cap") {
    DissipativeLindbladSpec spec = random_pauli_spec(1, 7);
    // (M+1)^K = 8^K explodes quickly at tight epsilon and large T.
    CHECK_THROWS(build_taylor_channel(spec, 40.0, 1e-10, 1 << 10));
}

TEST_CASE("validate rejects bad specs") {
    DissipativeLindbladSpec neg;
    neg.num_qubits = 1;
    neg.jumps.push_back({-0.5, BlockDiagPauli({PauliString::parse("+X")})});
    CHECK_THROWS(neg.validate());

    DissipativeLindbladSpec nonunitary;
    nonunitary.num_qubits = 1;
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 2.0;
    m(1, 1) = 1.0;
    nonunitary.jumps.push_back({0.5, m});
    CHECK_THROWS(nonunitary.validate());

    DissipativeLindbladSpec mismatched;
    mismatched.num_qubits = 2;
    mismatched.jumps.push_back({0.5, BlockDiagPauli({PauliString::parse("+X")})});
    CHECK_THROWS(mismatched.validate());
}

TEST_CASE("trajectory averages converge to the truncated channel") {
    DissipativeLindbladSpec spec = random_pauli_spec(1, 2);
    spec.validate();
    const double t = 0.5, eps = 1e-8;
    const Vector psi0 = random_state(2);
    const Matrix rho0 = psi0 * psi0.adjoint();
    const TruncationPlan plan = make_truncation_plan(spec.lindblad_norm() * t, eps);
    const Matrix target = apply_taylor_channel(spec, plan, rho0);

    Matrix avg = Matrix::Zero(2, 2);
    const int samples = 20000;
    for (int s = 0; s < samples; ++s) {
        const TrajectoryResult tr =
            sample_trajectory(spec, psi0, t, eps, std::uint64_t(s));
        avg += tr.state * tr.state.adjoint();
    }
    avg /= double(samples);
    // Monte-Carlo error ~ 1/sqrt(samples); allow a generous band.
    CHECK(trace_norm_hermitian(avg - target) <= 0.03);
}

TEST_CASE("sample_trajectory is deterministic in the seed") {
    DissipativeLindbladSpec spec = random_pauli_spec(2, 3);
    const Vector psi0 = random_state(4);
    const TrajectoryResult a = sample_trajectory(spec, psi0, 1.5, 1e-6, 77);
    const TrajectoryResult b = sample_trajectory(spec, psi0, 1.5, 1e-6, 77);
    CHECK(a.sequence == b.sequence);
    CHECK((a.state - b.state).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fast_forward_apply folds the sequence with log depth") {
    DissipativeLindbladSpec spec = random_pauli_spec(2, 4);
    for (std::size_t len : {1u, 2u, 7u, 64u, 1000u}) {
        std::vector<std::size_t> seq;
        for (std::size_t i = 0; i < len; ++i) seq.push_back(g_rng() % 4);
        const BlockDiagPauli folded = fast_forward_apply(spec, seq);
        Matrix dense = identity(4);
        for (std::size_t idx : seq) dense = dense * spec.jump_dense(idx);
        CHECK((folded.to_dense() - dense).cwiseAbs().maxCoeff() <= 1e-12);
    }
    // Empty sequence folds to the identity.
    const BlockDiagPauli id = fast_forward_apply(spec, {});
    CHECK((id.to_dense() - identity(4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fast_forward depth is exactly ceil(log2(len))") {
    DissipativeLindbladSpec spec = random_pauli_spec(1, 2);
    for (std::size_t len : {2u, 3u, 4u, 9u, 256u, 4096u}) {
        std::vector<std::size_t> seq(len);
        for (auto& s : seq) s = g_rng() % 2;
        ProductTreeStats stats;
        fast_forward_apply(spec, seq, &stats);
        CHECK(stats.depth == std::size_t(std::ceil(std::log2(double(len)))));
        CHECK(stats.multiplies == len - 1);
    }
}

TEST_CASE("liouvillian matrix generates the exact evolution") {
    DissipativeLindbladSpec spec = random_pauli_spec(1, 2);
    const Matrix l = liouvillian_matrix(spec);
    const Matrix rho0 = random_density(2);
    const Matrix via = matrixize((expm(l * 0.7) * vectorize(rho0)).eval());
    CHECK((via - exact_evolution(spec, rho0, 0.7)).cwiseAbs().maxCoeff() <= 1e-10);
    // Trace preservation: columns of L sum (against vec(I)) to zero.
    const Vector vec_id = vectorize(identity(2));
    CHECK((l.adjoint() * vec_id).cwiseAbs().maxCoeff() <= 1e-12);
}

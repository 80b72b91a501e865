#include "dissim/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace dissim {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void check_state_ceiling(const Vector& v) {
    if (v.size() > (Eigen::Index{1} << kQubitCeiling)) {
        throw std::invalid_argument("state exceeds the qubit ceiling");
    }
}

// Log-likelihood of the observed counts under p_m(theta) = sin^2((2m-1)theta).
double log_likelihood(double theta, const std::vector<int>& powers,
                      const std::vector<int>& hits, int shots) {
    double ll = 0.0;
    for (std::size_t j = 0; j < powers.size(); ++j) {
        const double s = std::sin((2.0 * powers[j] - 1.0) * theta);
        const double p = std::clamp(s * s, 1e-12, 1.0 - 1e-12);
        ll += hits[j] * std::log(p) + (shots - hits[j]) * std::log1p(-p);
    }
    return ll;
}

double mle_theta(const std::vector<int>& powers, const std::vector<int>& hits,
                 int shots) {
    constexpr int kGrid = 20001;
    const double hi = std::numbers::pi / 2;
    double best_theta = 0.0;
    double best_ll = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGrid; ++i) {
        const double theta = hi * i / (kGrid - 1);
        const double ll = log_likelihood(theta, powers, hits, shots);
        if (ll > best_ll) {
            best_ll = ll;
            best_theta = theta;
        }
    }
    // Golden-section refinement inside the winning grid cell.
    const double step = hi / (kGrid - 1);
    double a = std::max(0.0, best_theta - step);
    double b = std::min(hi, best_theta + step);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 80; ++it) {
        const double x1 = b - gr * (b - a);
        const double x2 = a + gr * (b - a);
        if (log_likelihood(x1, powers, hits, shots) <
            log_likelihood(x2, powers, hits, shots)) {
            a = x1;
        } else {
            b = x2;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

AmplitudeProblem AmplitudeProblem::from_unitaries(const Matrix& u1,
                                                  const Matrix& u2,
                                                  double epsilon, double delta) {
    if (u1.rows() != u2.rows()) {
        throw std::invalid_argument("AmplitudeProblem: dimension mismatch");
    }
    if (!is_unitary(u1) || !is_unitary(u2)) {
        throw std::invalid_argument("AmplitudeProblem: preparations must be unitary");
    }
    AmplitudeProblem p;
    p.s1 = u1.col(0);
    p.s2 = u2.col(0);
    p.epsilon = epsilon;
    p.delta = delta;
    return p;
}

double AmplitudeProblem::truth() const { return std::abs(s1.dot(s2)); }

Matrix grover_operator(const Matrix& u1, const Matrix& u2) {
    if (u1.rows() != u2.rows()) {
        throw std::invalid_argument("grover_operator: dimension mismatch");
    }
    const Eigen::Index d = u1.rows();
    check_dense_ceiling(d);
    const Vector a = u1.col(0);
    const Vector b = u2.col(0);
    const Matrix r1 = Matrix::Identity(d, d) - 2.0 * (a * a.adjoint());
    const Matrix r2 = Matrix::Identity(d, d) - 2.0 * (b * b.adjoint());
    return r1 * r2;
}

Matrix projector_block_unitary(const Matrix& pi) {
    const Eigen::Index d = pi.rows();
    Matrix u(2 * d, 2 * d);
    const Matrix comp = Matrix::Identity(d, d) - pi;
    u.topLeftCorner(d, d) = pi;
    u.topRightCorner(d, d) = comp;
    u.bottomLeftCorner(d, d) = comp;
    u.bottomRightCorner(d, d) = pi;
    return u;
}

AmplitudeProblem hadamard_test_embed(const Vector& s1, const Vector& s2,
                                     bool imag_part, double epsilon,
                                     double delta) {
    if (s1.size() != s2.size()) {
        throw std::invalid_argument("hadamard_test_embed: dimension mismatch");
    }
    const Eigen::Index d = s1.size();
    // psi = (|0>(s1 + c s2) + |1>(s1 - c s2)) / 2 with c = 1 (real) or -i (imag).
    const Complex c = imag_part ? Complex(0.0, -1.0) : Complex(1.0, 0.0);
    Vector psi(2 * d);
    psi.head(d) = 0.5 * (s1 + c * s2);
    psi.tail(d) = 0.5 * (s1 - c * s2);
    // Second ancilla: s1' = |0>psi, s2' = |0>(Pi psi) + |1>((I-Pi)psi) with
    // Pi = |0><0|_anc (x) I, so <s1'|s2'> = <psi|Pi|psi> = (1 + Re/Im)/2 >= 0.
    AmplitudeProblem out;
    out.s1 = Vector::Zero(4 * d);
    out.s1.head(2 * d) = psi;
    out.s2 = Vector::Zero(4 * d);
    out.s2.head(d) = psi.head(d);
    out.s2.segment(3 * d, d) = psi.tail(d);
    out.epsilon = epsilon;
    out.delta = delta;
    return out;
}

EstimateReport mlae_estimate(const AmplitudeProblem& problem,
                             std::uint64_t seed, int shots_per_power) {
    check_state_ceiling(problem.s1);
    if (problem.s1.size() != problem.s2.size()) {
        throw std::invalid_argument("mlae_estimate: dimension mismatch");
    }
    if (!(problem.epsilon > 0.0) || !(problem.delta > 0.0) ||
        shots_per_power < 1) {
        throw std::invalid_argument("mlae_estimate: invalid parameters");
    }
    EstimateReport report;
    report.seed = seed;
    report.shots_per_power = shots_per_power;
    const int m_max =
        std::max(1, static_cast<int>(std::ceil(1.0 / (2.0 * problem.epsilon))));
    for (int m = 1; m < m_max; m *= 2) report.powers.push_back(m);
    if (report.powers.empty() || report.powers.back() != m_max) {
        report.powers.push_back(m_max);
    }
    report.repeats = std::max(1, static_cast<int>(std::ceil(
                                     std::log(1.0 / problem.delta))));

    // Exact per-power probabilities by honest reflection dynamics:
    // v_m = (R_{s1} R_{s2})^m s2, p_m = |<s1|v_m>|^2.
    const Vector& s1 = problem.s1;
    const Vector& s2 = problem.s2;
    std::vector<double> prob;
    prob.reserve(report.powers.size());
    Vector v = s2;
    int applied = 0;
    for (int m : report.powers) {
        for (; applied < m; ++applied) {
            v -= 2.0 * (s2.dot(v)) * s2;
            v -= 2.0 * (s1.dot(v)) * s1;
        }
        const double amp = std::abs(s1.dot(v));
        prob.push_back(std::clamp(amp * amp, 0.0, 1.0));
    }

    std::mt19937_64 rng(seed);
    std::vector<double> estimates;
    estimates.reserve(static_cast<std::size_t>(report.repeats));
    for (int r = 0; r < report.repeats; ++r) {
        std::vector<int> hits(report.powers.size(), 0);
        for (std::size_t j = 0; j < report.powers.size(); ++j) {
            for (int s = 0; s < shots_per_power; ++s) {
                if (uniform01(rng) < prob[j]) ++hits[j];
            }
        }
        estimates.push_back(
            std::sin(mle_theta(report.powers, hits, shots_per_power)));
    }
    std::sort(estimates.begin(), estimates.end());
    report.estimate = estimates[estimates.size() / 2];
    std::size_t q = 0;
    for (int m : report.powers) {
        q += static_cast<std::size_t>(shots_per_power) *
             static_cast<std::size_t>(2 * m + 1);
    }
    report.queries = q * static_cast<std::size_t>(report.repeats);
    return report;
}

double shot_estimate(double x, std::size_t shots, std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("shot_estimate: shots must be >= 1");
    if (x < -1.0 || x > 1.0) {
        throw std::invalid_argument("shot_estimate: expectation must lie in [-1, 1]");
    }
    const double p = 0.5 * (1.0 + x);
    std::mt19937_64 rng(seed);
    std::size_t ones = 0;
    for (std::size_t s = 0; s < shots; ++s) {
        if (uniform01(rng) < p) ++ones;
    }
    return 2.0 * static_cast<double>(ones) / static_cast<double>(shots) - 1.0;
}

}  // namespace dissim

#include "dissim/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace dissim {

namespace {

// Renormalized truncated-Poisson weights C^2 e^{-T} T^k/k!, k = 0..K.
// They sum to exactly 1 by the definition of C.
std::vector<double> truncated_poisson_weights(const TruncationPlan& plan) {
    std::vector<double> w(static_cast<std::size_t>(plan.K) + 1);
    double term = std::exp(-plan.T);
    for (int k = 0; k <= plan.K; ++k) {
        w[static_cast<std::size_t>(k)] = term;
        term *= plan.T / static_cast<double>(k + 1);
    }
    const double c2 = plan.C * plan.C;
    for (double& x : w) x *= c2;
    return w;
}

// Uniform double in [0,1) from the top 53 bits, independent of the standard
// library's distribution implementation.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t inverse_cdf(const std::vector<double>& weights, double u) {
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.size() - 1;
}

}  // namespace

Matrix Jump::dense() const {
    if (const auto* m = std::get_if<Matrix>(&op)) return *m;
    return std::get<BlockDiagPauli>(op).to_dense();
}

double DissipativeLindbladSpec::lindblad_norm() const {
    double s = 0.0;
    for (const auto& j : jumps) s += j.rate;
    return s;
}

std::vector<double> DissipativeLindbladSpec::probabilities() const {
    const double norm = lindblad_norm();
    if (norm <= 0.0) {
        throw std::invalid_argument("probabilities: total rate must be positive");
    }
    std::vector<double> p;
    p.reserve(jumps.size());
    for (const auto& j : jumps) p.push_back(j.rate / norm);
    return p;
}

bool DissipativeLindbladSpec::pauli_form() const {
    if (jumps.empty()) return false;
    return std::all_of(jumps.begin(), jumps.end(),
                       [](const Jump& j) { return j.is_pauli(); });
}

std::size_t DissipativeLindbladSpec::block_count() const {
    if (!pauli_form()) {
        throw std::invalid_argument("block_count: spec is not in Pauli form");
    }
    return std::get<BlockDiagPauli>(jumps.front().op).num_blocks();
}

void DissipativeLindbladSpec::validate(const Tolerances& tol) const {
    if (num_qubits <= 0) {
        throw std::invalid_argument("spec: qubit count must be positive");
    }
    if (jumps.empty()) {
        throw std::invalid_argument("spec: at least one jump required");
    }
    double total = 0.0;
    for (const auto& j : jumps) {
        if (!(j.rate >= 0.0)) {
            throw std::invalid_argument("spec: jump rates must be nonnegative");
        }
        total += j.rate;
    }
    if (!(total > 0.0)) {
        throw std::invalid_argument("spec: total rate must be positive");
    }
    const bool pauli = pauli_form();
    Eigen::Index d = -1;
    for (const auto& j : jumps) {
        if (pauli) {
            const auto& b = std::get<BlockDiagPauli>(j.op);
            if (b.num_qubits() != static_cast<std::uint32_t>(num_qubits)) {
                throw std::invalid_argument("spec: Pauli block qubit count mismatch");
            }
            if (b.num_blocks() != block_count()) {
                throw std::invalid_argument("spec: Pauli block count mismatch");
            }
        }
        const Matrix f = j.dense();
        if (d < 0) d = f.rows();
        if (f.rows() != d || f.cols() != d) {
            throw std::invalid_argument("spec: jump dimension mismatch");
        }
        if (!is_unitary(f, tol.herm)) {
            throw std::invalid_argument("spec: jump operator is not unitary");
        }
    }
    if (!pauli && d != dim()) {
        throw std::invalid_argument("spec: dense jump size does not match qubit count");
    }
}

double TruncationPlan::bound() const {
    if (T == 0.0) return 0.0;
    return std::exp(std::log(2.0) + (K + 1) * std::log(T) - std::lgamma(K + 2.0));
}

int truncation_order(double T, double epsilon) {
    if (!(T >= 0.0)) throw std::invalid_argument("truncation_order: T must be >= 0");
    if (!(epsilon > 0.0) || !(epsilon < 2.0)) {
        throw std::invalid_argument("truncation_order: epsilon must lie in (0, 2)");
    }
    if (T == 0.0) return 0;
    const double log_eps = std::log(epsilon);
    const double log_t = std::log(T);
    int k = 0;
    while (std::log(2.0) + (k + 1) * log_t - std::lgamma(k + 2.0) > log_eps) {
        ++k;
    }
    return k;
}

namespace {

void fill_normalization(TruncationPlan& plan) {
    double sum = 0.0;
    double term = std::exp(-plan.T);
    for (int k = 0; k <= plan.K; ++k) {
        sum += term;
        term *= plan.T / static_cast<double>(k + 1);
    }
    plan.C = std::sqrt(1.0 / sum);
}

}  // namespace

TruncationPlan make_truncation_plan(double T, double epsilon) {
    TruncationPlan plan;
    plan.T = T;
    plan.epsilon_target = epsilon;
    plan.K = truncation_order(T, epsilon);
    fill_normalization(plan);
    return plan;
}

TruncationPlan forced_truncation_plan(double T, int K) {
    if (!(T >= 0.0) || K < 0) {
        throw std::invalid_argument("forced_truncation_plan: invalid parameters");
    }
    TruncationPlan plan;
    plan.T = T;
    plan.K = K;
    plan.epsilon_target = plan.bound();
    fill_normalization(plan);
    return plan;
}

Matrix liouvillian_matrix(const DissipativeLindbladSpec& spec) {
    spec.validate();
    const Eigen::Index d = spec.jump_dense(0).rows();
    check_dense_ceiling(d * d);
    Matrix l = Matrix::Zero(d * d, d * d);
    for (const auto& j : spec.jumps) {
        const Matrix f = j.dense();
        l += j.rate * kron(f, f.conjugate());
    }
    l -= spec.lindblad_norm() * Matrix::Identity(d * d, d * d);
    return l;
}

Matrix exact_evolution(const DissipativeLindbladSpec& spec, const Matrix& rho0,
                       double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("exact_evolution: t must be >= 0");
    const Matrix l = liouvillian_matrix(spec);
    if (rho0.rows() * rho0.cols() != l.rows()) {
        throw std::invalid_argument("exact_evolution: state dimension mismatch");
    }
    return matrixize(expm(l * t) * vectorize(rho0));
}

Matrix taylor_superoperator(const DissipativeLindbladSpec& spec,
                            const TruncationPlan& plan) {
    spec.validate();
    const auto p = spec.probabilities();
    const Eigen::Index d = spec.jump_dense(0).rows();
    check_dense_ceiling(d * d);
    Matrix one_jump = Matrix::Zero(d * d, d * d);
    for (std::size_t i = 0; i < spec.jumps.size(); ++i) {
        const Matrix f = spec.jump_dense(i);
        one_jump += p[i] * kron(f, f.conjugate());
    }
    const auto weights = truncated_poisson_weights(plan);
    Matrix power = Matrix::Identity(d * d, d * d);
    Matrix acc = weights[0] * power;
    for (int k = 1; k <= plan.K; ++k) {
        power = one_jump * power;
        acc += weights[static_cast<std::size_t>(k)] * power;
    }
    return acc;
}

Matrix apply_taylor_channel(const DissipativeLindbladSpec& spec,
                            const TruncationPlan& plan, const Matrix& rho0) {
    spec.validate();
    const auto p = spec.probabilities();
    std::vector<Matrix> f;
    f.reserve(spec.jumps.size());
    for (std::size_t i = 0; i < spec.jumps.size(); ++i) {
        f.push_back(spec.jump_dense(i));
    }
    if (rho0.rows() != f[0].rows() || rho0.cols() != f[0].rows()) {
        throw std::invalid_argument("apply_taylor_channel: state dimension mismatch");
    }
    const auto weights = truncated_poisson_weights(plan);
    Matrix current = rho0;
    Matrix acc = weights[0] * current;
    for (int k = 1; k <= plan.K; ++k) {
        Matrix next = Matrix::Zero(current.rows(), current.cols());
        for (std::size_t i = 0; i < f.size(); ++i) {
            next += p[i] * (f[i] * current * f[i].adjoint());
        }
        current.swap(next);
        acc += weights[static_cast<std::size_t>(k)] * current;
    }
    return acc;
}

KrausChannel build_taylor_channel(const DissipativeLindbladSpec& spec, double t,
                                  double epsilon, std::size_t cap) {
    spec.validate();
    const TruncationPlan plan = make_truncation_plan(spec.lindblad_norm() * t,
                                                     epsilon);
    const std::size_t m = spec.jump_count();
    double count_estimate = 1.0;
    for (int k = 0; k < plan.K; ++k) count_estimate *= static_cast<double>(m + 1);
    if (count_estimate > static_cast<double>(cap)) {
        throw std::invalid_argument(
            "build_taylor_channel: (M+1)^K exceeds the enumeration cap; use "
            "sample_trajectory or apply_taylor_channel instead");
    }
    const auto p = spec.probabilities();
    std::vector<Matrix> f;
    f.reserve(m);
    for (std::size_t i = 0; i < m; ++i) f.push_back(spec.jump_dense(i));
    const auto weights = truncated_poisson_weights(plan);

    KrausChannel channel;
    const Eigen::Index d = f[0].rows();
    channel.ops.push_back(std::sqrt(weights[0]) * Matrix::Identity(d, d));
    // Sequences of length k, extended one index at a time.
    std::vector<std::pair<Matrix, double>> level;
    level.emplace_back(Matrix::Identity(d, d), 1.0);
    for (int k = 1; k <= plan.K; ++k) {
        std::vector<std::pair<Matrix, double>> next;
        next.reserve(level.size() * m);
        for (const auto& [op, prob] : level) {
            for (std::size_t i = 0; i < m; ++i) {
                next.emplace_back(f[i] * op, prob * p[i]);
            }
        }
        level.swap(next);
        const double wk = weights[static_cast<std::size_t>(k)];
        for (const auto& [op, prob] : level) {
            channel.ops.push_back(std::sqrt(wk * prob) * op);
        }
    }
    return channel;
}

TrajectoryResult sample_trajectory(const DissipativeLindbladSpec& spec,
                                   const Vector& psi0, double t, double epsilon,
                                   std::uint64_t seed) {
    spec.validate();
    if (!(t >= 0.0)) throw std::invalid_argument("sample_trajectory: t must be >= 0");
    const Eigen::Index d = spec.jump_dense(0).rows();
    if (psi0.size() != d) {
        throw std::invalid_argument("sample_trajectory: state dimension mismatch");
    }
    if (std::abs(psi0.norm() - 1.0) > 1e-8) {
        throw std::invalid_argument("sample_trajectory: input state must be normalized");
    }
    TrajectoryResult result;
    result.plan = make_truncation_plan(spec.lindblad_norm() * t, epsilon);
    std::mt19937_64 rng(seed);
    const auto k_weights = truncated_poisson_weights(result.plan);
    const std::size_t k = inverse_cdf(k_weights, uniform01(rng));
    const auto p = spec.probabilities();
    result.sequence.reserve(k);
    for (std::size_t s = 0; s < k; ++s) {
        result.sequence.push_back(inverse_cdf(p, uniform01(rng)));
    }
    if (result.sequence.empty()) {
        result.state = psi0;
        return result;
    }
    if (spec.pauli_form()) {
        // The state picks up F_{i_k} ... F_{i_1}, so fold the reversed sequence.
        std::vector<BlockDiagPauli> ops;
        ops.reserve(result.sequence.size());
        for (auto it = result.sequence.rbegin(); it != result.sequence.rend(); ++it) {
            ops.push_back(std::get<BlockDiagPauli>(spec.jumps[*it].op));
        }
        result.state = product_tree(std::span<const BlockDiagPauli>(ops)).to_dense() *
                       psi0;
    } else {
        Vector psi = psi0;
        for (std::size_t idx : result.sequence) {
            psi = spec.jump_dense(idx) * psi;
        }
        result.state = psi;
    }
    return result;
}

BlockDiagPauli fast_forward_apply(const DissipativeLindbladSpec& spec,
                                  const std::vector<std::size_t>& sequence,
                                  ProductTreeStats* stats) {
    if (!spec.pauli_form()) {
        throw std::invalid_argument("fast_forward_apply: spec is not in Pauli form");
    }
    if (sequence.empty()) {
        if (stats) *stats = {};
        return BlockDiagPauli::identity(spec.block_count(),
                                        static_cast<std::uint32_t>(spec.num_qubits));
    }
    std::vector<BlockDiagPauli> ops;
    ops.reserve(sequence.size());
    for (std::size_t idx : sequence) {
        if (idx >= spec.jump_count()) {
            throw std::out_of_range("fast_forward_apply: jump index out of range");
        }
        ops.push_back(std::get<BlockDiagPauli>(spec.jumps[idx].op));
    }
    return product_tree(std::span<const BlockDiagPauli>(ops), stats);
}

}  // namespace dissim

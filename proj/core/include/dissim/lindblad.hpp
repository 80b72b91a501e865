#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "dissim/linalg.hpp"
#include "dissim/pauli.hpp"

namespace dissim {

/// One dissipative jump: rate g >= 0 and a unitary operator, either dense or
/// in block-diagonal Pauli form.
struct Jump {
    double rate = 0.0;
    std::variant<Matrix, BlockDiagPauli> op;

    Matrix dense() const;
    bool is_pauli() const { return std::holds_alternative<BlockDiagPauli>(op); }
};

/// Purely dissipative Lindbladian L_d[rho] = sum_i g_i (F_i rho F_i^dag - rho)
/// with unitary jumps F_i.
struct DissipativeLindbladSpec {
    int num_qubits = 0;
    std::vector<Jump> jumps;

    std::size_t jump_count() const { return jumps.size(); }
    Eigen::Index dim() const { return Eigen::Index{1} << num_qubits; }

    /// ||L_d||_L = sum_i g_i.
    double lindblad_norm() const;
    std::vector<double> probabilities() const;

    bool pauli_form() const;
    /// Block count R, Pauli form only.
    std::size_t block_count() const;

    Matrix jump_dense(std::size_t i) const { return jumps[i].dense(); }

    /// Checks rates, unitarity of every jump, and shape agreement. Throws
    /// std::invalid_argument on violation.
    void validate(const Tolerances& tol = {}) const;
};

struct TruncationPlan {
    double T = 0.0;
    int K = 0;
    double C = 1.0;
    double epsilon_target = 0.0;

    /// 2 T^{K+1}/(K+1)!, the diamond-distance bound this plan guarantees.
    double bound() const;
};

/// Smallest K with 2 T^{K+1}/(K+1)! <= epsilon, evaluated in the log domain.
int truncation_order(double T, double epsilon);

TruncationPlan make_truncation_plan(double T, double epsilon);

/// Plan with the truncation order pinned rather than derived from epsilon.
TruncationPlan forced_truncation_plan(double T, int K);

/// sum_i g_i (F_i (x) conj(F_i)) - (sum_i g_i) I on dim 4^n.
Matrix liouvillian_matrix(const DissipativeLindbladSpec& spec);

/// matrixize(expm(L_d t) vectorize(rho0)).
Matrix exact_evolution(const DissipativeLindbladSpec& spec, const Matrix& rho0,
                       double t);

/// Superoperator of the Taylor-truncated channel
/// A[rho] = C^2 sum_{k<=K} e^{-T} (T^k/k!) sum_{i_k} p_{i_k} F_{i_k} rho F_{i_k}^dag.
Matrix taylor_superoperator(const DissipativeLindbladSpec& spec,
                            const TruncationPlan& plan);

/// Applies the truncated channel to rho0 by iterating the one-jump map,
/// avoiding Kraus enumeration.
Matrix apply_taylor_channel(const DissipativeLindbladSpec& spec,
                            const TruncationPlan& plan, const Matrix& rho0);

inline constexpr std::size_t kKrausEnumerationCap = std::size_t{1} << 16;

/// Explicit Kraus form; refuses when (M+1)^K exceeds the enumeration cap.
KrausChannel build_taylor_channel(const DissipativeLindbladSpec& spec, double t,
                                  double epsilon,
                                  std::size_t cap = kKrausEnumerationCap);

struct TrajectoryResult {
    Vector state;
    std::vector<std::size_t> sequence;  ///< jump indices, in application order
    TruncationPlan plan;
};

/// One Monte-Carlo unravelling of the truncated channel: k drawn from the
/// renormalized truncated Poisson(T) by inverse CDF, then k i.i.d. jump
/// indices from p. Pauli-form jumps are folded by product_tree.
TrajectoryResult sample_trajectory(const DissipativeLindbladSpec& spec,
                                   const Vector& psi0, double t, double epsilon,
                                   std::uint64_t seed);

/// Folds the indexed jump sequence into a single operator with a log-depth
/// product tree. Empty sequences give the identity.
BlockDiagPauli fast_forward_apply(const DissipativeLindbladSpec& spec,
                                  const std::vector<std::size_t>& sequence,
                                  ProductTreeStats* stats = nullptr);

}  // namespace dissim

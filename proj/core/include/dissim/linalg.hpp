#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dissim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct Tolerances {
    double herm = 1e-10;
    double trace = 1e-10;
    double cptp = 1e-9;
    double psd = 1e-10;
};

/// Dense operations refuse dimensions above this unless overridden.
inline constexpr Eigen::Index kDenseCeiling = 4096;

void check_dense_ceiling(Eigen::Index dim, Eigen::Index ceiling = kDenseCeiling);

Matrix kron(const Matrix& a, const Matrix& b);

/// |O>> = sum_ij o_ij |i>|j> (row-major stacking).
Vector vectorize(const Matrix& o);
Matrix matrixize(const Vector& v);

/// Superoperator sum_i A_i (x) conj(B_i) acting on vectorized operators,
/// so that applying it to |O>> equals |sum_i A_i O B_i^dag>>.
Matrix superop_of_map(std::span<const Matrix> a_list,
                      std::span<const Matrix> b_list);

/// Matrix exponential (scaling-and-squaring Pade, via Eigen).
Matrix expm(const Matrix& m);

struct KrausChannel {
    std::vector<Matrix> ops;

    Eigen::Index dim() const;
    /// Max-abs deviation of sum A_i^dag A_i from the identity.
    double cptp_residual() const;
    Matrix superoperator() const;
};

Matrix apply_channel(const KrausChannel& c, const Matrix& rho,
                     const Tolerances& tol = {});

/// (C (x) I)[|Omega><Omega|] with the normalized Bell state |Omega>.
Matrix choi_state(const KrausChannel& c);
Matrix choi_of_superop(const Matrix& s);

/// Trace norm of a Hermitian matrix (sum of absolute eigenvalues).
double trace_norm_hermitian(const Matrix& m);

/// ||choi(C1) - choi(C2)||_1, a lower bound on the diamond distance.
double choi_trace_distance(const KrausChannel& c1, const KrausChannel& c2);
double choi_trace_distance(const Matrix& superop1, const Matrix& superop2);

/// Partial trace keeping the given qubits (indices over [0, total_qubits),
/// qubit 0 most significant).
Matrix partial_trace(const Matrix& rho, int total_qubits,
                     const std::vector<int>& keep);

/// Stinespring isometry V with V|psi> = sum_i |i>_env (x) A_i|psi>; the
/// environment dimension is the Kraus count padded to a power of two.
Matrix stinespring_isometry(const KrausChannel& c, const Tolerances& tol = {});

bool is_density_matrix(const Matrix& rho, const Tolerances& tol = {});
bool is_unitary(const Matrix& u, double tol = 1e-10);

Matrix identity(Eigen::Index dim);

/// Embeds a gate on `gate_qubits` (given as positions, qubit 0 most
/// significant) into an n-qubit operator, identity elsewhere.
Matrix embed_gate(const Matrix& gate, const std::vector<int>& gate_qubits,
                  int total_qubits);

/// Applies a gate to a statevector in place without forming the embedded
/// dense operator. Qubit 0 is the most significant index bit.
void apply_gate_inplace(Vector& state, int total_qubits, const Matrix& gate,
                        const std::vector<int>& gate_qubits);

/// A unitary whose first column is the given unit vector (Householder-style
/// completion; deterministic).
Matrix unitary_from_state(const Vector& v);

}  // namespace dissim

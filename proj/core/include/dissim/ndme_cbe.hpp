#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dissim/linalg.hpp"
#include "dissim/pauli.hpp"

namespace dissim {

/// U_B^{(x)n} on 2n qubits, pairing row qubit q with column qubit n+q, where
/// the two-qubit block is (H (x) I) CNOT. It maps vectorized I/X Pauli words
/// onto computational basis states: per qubit, vec(I) -> sqrt(2)|00> and
/// vec(X) -> sqrt(2)|01>.
Matrix bell_rotation(int n);

/// S = 2^{-n/2} sum_i c_i P_i with P_i the I/X word for basis index i, so
/// S(a, b) = 2^{-n/2} c_{a xor b}.
Matrix pqc_encode(const Vector& state);
Vector pqc_decode(const Matrix& s);

/// gamma_S = 1 / (2 ||H^{(x)n} |S>||_1).
double gamma_upper_bound(const Vector& state);

struct NdmeState {
    int n = 0;
    Matrix rho;        ///< density matrix on n+1 qubits
    double gamma = 0;
    Matrix encoded_S;  ///< upper-right block of rho divided by gamma
};

/// rho = (D0, gamma S; gamma S^dag, D1) completed through the Hadamard-rotated
/// frame, feasible exactly when gamma <= gamma_upper_bound(state).
NdmeState ndme_construct(const Vector& state, double gamma);

struct CbePair {
    Matrix K;
    Matrix L;
};

/// eta-CBE of Q: (<0|^n (x) I) U_B^n (sum_i K_i (x) conj(L_i)) U_B^{n dag}
/// (|0>^n (x) I) = eta Q, with sum K^dag K = sum L^dag L = I.
struct CbeChannel {
    int n = 0;
    double eta = 1.0;
    Matrix encoded_op;  ///< Q
    std::vector<CbePair> pairs;

    double cptp_residual() const;
    /// Channel on the n+1 qubit NDME space with Kraus blockdiag(K_i, L_i).
    KrausChannel block_channel() const;
};

enum class CbeGate { X, Y, Z, H, HSH, HTH, CNOT_HAD };

/// The optimal single-table constructions; eta = 1/sqrt(2) for H, 1 otherwise.
CbeChannel gate_cbe(CbeGate gate);

struct CbeVerification {
    bool pass = false;
    double residual = 0.0;         ///< deviation from eta Q after projection
    double strong_residual = 0.0;  ///< leakage of the composed projection
};

CbeVerification verify_cbe(const CbeChannel& c, double tol = 1e-10);

/// Kraus pairs (K2 K1, L2 L1), eta = eta1 eta2, Q = Q2 Q1. Both inputs must
/// verify as strong CBEs.
CbeChannel compose_cbe(const CbeChannel& c2, const CbeChannel& c1);

struct CircuitGate {
    std::string g;       ///< one of H, S, T, CNOT
    std::vector<int> q;  ///< target qubit(s); CNOT is {control, target}
};

inline constexpr std::size_t kCbePairCap = 4096;

/// CBE of Had^{(x)n} U Had^{(x)n} for the circuit U over {H, S, T, CNOT},
/// with eta = 2^{-n_h/2} where n_h counts Hadamard gates.
CbeChannel compile_circuit_cbe(const std::vector<CircuitGate>& gates, int n,
                               std::size_t pair_cap = kCbePairCap);

/// The same circuit as one CbeChannel per gate, embedded on n qubits, in
/// application order; lets callers apply long circuits without the composed
/// pair count blowing up.
std::vector<CbeChannel> per_gate_cbe_channels(
    const std::vector<CircuitGate>& gates, int n);

struct EtaEstimate {
    double value = 0.0;
    Vector witness;
};

/// Heuristic upper-bound estimate of inf_S ||H^n |S>||_1 / ||H^n U|S>||_1 by
/// multi-start random local search. The true infimum is <= the return value.
EtaEstimate eta_upper_bound_estimate(const Matrix& u, int starts = 64,
                                     int iterations = 500,
                                     std::uint64_t seed = 12345);

/// Pauli pair (P0, P1) with U_B^n (P0 (x) conj(P1)) U_B^{n dag} = -I (x) Q'.
/// Q' must carry a real sign (+1 or -1); the global phase lands on P0 and the
/// construction is dense-verified when the dimension permits.
std::pair<PauliString, PauliString> hamiltonian_jump_construction(
    const PauliString& q_prime);

}  // namespace dissim

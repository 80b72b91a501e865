#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "dissim/estimation.hpp"
#include "dissim/lindblad.hpp"
#include "dissim/ndme_cbe.hpp"

namespace dissim {

struct HamiltonianTerm {
    double coeff = 0.0;   ///< lambda_i >= 0
    PauliString pauli;    ///< Q_i, sign allowed (+1 or -1 phase)

    HamiltonianTerm() : pauli(1) {}
    HamiltonianTerm(double c, PauliString p) : coeff(c), pauli(std::move(p)) {}
};

/// Target quantity: <psi1| e^{-beta (H + I)} |psi2> with psi1 = U1 |+>^n,
/// psi2 = U2 |0>^n, H = sum lambda_i Q_i.
struct GcaProblem {
    int n = 0;
    std::vector<HamiltonianTerm> hamiltonian;
    double beta = 0.0;
    std::vector<CircuitGate> u1_gates;
    std::vector<CircuitGate> u2_gates;
    double epsilon = 1e-3;
    double delta = 0.05;

    /// Rescales the coefficients to sum to 1 and beta inversely, preserving
    /// beta * sum(lambda). Returns the applied scale factor.
    double normalize();
    double coeff_sum() const;

    int hadamard_count() const;  ///< n_h over both circuits
    int circuit_depth() const;   ///< D = total gate count
    /// 2^{(n - n_h)/2}.
    double amplification_factor() const;

    Matrix hamiltonian_dense() const;
    void validate() const;
};

struct GcaEstimate {
    double re = 0.0;
    double im = 0.0;
    std::string method;  ///< exact | shots | mlae
    double amplification_factor = 1.0;
    double raw_x = 0.0;  ///< Tr((X (x) I) rho_out)
    double raw_y = 0.0;  ///< Tr((Y (x) I) rho_out)
    std::size_t queries = 0;
    std::uint64_t seed = 0;
    bool near_boundary = false;  ///< |estimate| within 2 epsilon of the bound
};

/// Pauli-form spec (R = 2) whose evolution for time beta is a 1-CBE of
/// e^{-beta (H' + I)} with H' = Had^n H Had^n.
DissipativeLindbladSpec gibbs_lindbladian(const GcaProblem& problem);

/// Dense gate-list product, first gate applied first.
Matrix circuit_unitary(const std::vector<CircuitGate>& gates, int n);

/// Reversed, gate-wise adjoint list over the same gate set (S -> SSS, T -> T^7).
std::vector<CircuitGate> adjoint_gates(const std::vector<CircuitGate>& gates);

std::complex<double> exact_gca_oracle(const GcaProblem& problem);

/// rho_out of the pipeline C_{u1 dag} o e^{L_H beta} o C_{u2} applied to
/// |+><+|^{(x)(n+1)}, with the Taylor channel truncated at order K.
Matrix pipeline_density(const GcaProblem& problem, int truncation_k);

GcaEstimate run_pipeline_exact(const GcaProblem& problem);
/// Same, but with the truncation order forced (for convergence studies).
GcaEstimate run_pipeline_exact_k(const GcaProblem& problem, int truncation_k);

GcaEstimate run_pipeline_shots(const GcaProblem& problem, std::size_t shots,
                               std::uint64_t seed);

GcaEstimate run_pipeline_mlae(const GcaProblem& problem, std::uint64_t seed,
                              int ceiling_qubits = kQubitCeiling);

/// Simulation-error budget handed to the Lindbladian truncation:
/// (1/2) 2^{(n-n_h)/2} epsilon, clamped into truncation_order's domain.
double simulation_epsilon(const GcaProblem& problem);

}  // namespace dissim

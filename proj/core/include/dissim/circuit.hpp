#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dissim/lindblad.hpp"

namespace dissim {

enum class CircuitMode { theorem1, theorem2 };

enum class GateKind {
    prepare_count,    ///< U_T on register a
    jump_prep,        ///< controlled U_g on (a_k, b_k)
    select_jump,      ///< U_F on (b_k, system)
    encode_jump,      ///< V_F on (b_k, c_k)
    pauli_product,    ///< U_P combining two code registers
    table_apply,      ///< T_F applying the folded code to the system
};

struct RegisterInfo {
    std::string name;
    int width = 0;
    int offset = 0;  ///< first qubit index within the circuit
};

struct GateNode {
    GateKind kind = GateKind::prepare_count;
    int cost = 1;                      ///< contribution to the critical path
    std::vector<int> registers;        ///< indices into the register table
    std::vector<std::size_t> preds;    ///< DAG predecessors
};

struct ResourceTally {
    std::size_t ug_queries = 0;
    std::size_t uf_queries = 0;
    std::size_t vf_queries = 0;
    int depth = 0;
    int ancilla_qubits = 0;
    int total_qubits = 0;
};

struct PurifiedCircuit {
    CircuitMode mode = CircuitMode::theorem1;
    TruncationPlan plan;
    std::size_t num_jumps = 0;   ///< M
    std::size_t num_blocks = 1;  ///< R (Pauli path), 1 otherwise
    int index_width = 0;         ///< ceil(log2(M+1))
    int system_width = 0;
    std::vector<RegisterInfo> registers;
    std::vector<GateNode> gates;

    int total_qubits() const;
    /// Longest cost-weighted path through the gate DAG.
    int depth() const;
    ResourceTally resources() const;
};

PurifiedCircuit build_purified_circuit(const DissipativeLindbladSpec& spec,
                                       double t, double epsilon,
                                       CircuitMode mode);

/// Executes a theorem1-mode circuit on |0...0> (x) |psi0| by statevector
/// simulation and traces out everything but the system register. Refused
/// above the qubit ceiling or in theorem2 mode.
Matrix simulate_purified_density(const PurifiedCircuit& circuit,
                                 const DissipativeLindbladSpec& spec,
                                 const Vector& psi0, int ceiling_qubits = 14);

}  // namespace dissim

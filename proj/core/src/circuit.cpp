#include "dissim/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dissim {

namespace {

int ceil_log2(std::size_t x) {
    int b = 0;
    while ((std::size_t{1} << b) < x) ++b;
    return b;
}

}  // namespace

int PurifiedCircuit::total_qubits() const {
    int total = 0;
    for (const auto& r : registers) total += r.width;
    return total;
}

int PurifiedCircuit::depth() const {
    std::vector<int> dist(gates.size(), 0);
    int depth = 0;
    for (std::size_t i = 0; i < gates.size(); ++i) {
        int longest = 0;
        for (std::size_t p : gates[i].preds) {
            if (p >= i) {
                throw std::logic_error("PurifiedCircuit: gates are not topologically ordered");
            }
            longest = std::max(longest, dist[p]);
        }
        dist[i] = longest + gates[i].cost;
        depth = std::max(depth, dist[i]);
    }
    return depth;
}

ResourceTally PurifiedCircuit::resources() const {
    ResourceTally t;
    for (const auto& g : gates) {
        switch (g.kind) {
            case GateKind::jump_prep: ++t.ug_queries; break;
            case GateKind::select_jump: ++t.uf_queries; break;
            case GateKind::encode_jump: ++t.vf_queries; break;
            default: break;
        }
    }
    t.depth = depth();
    t.total_qubits = total_qubits();
    t.ancilla_qubits = t.total_qubits - system_width;
    return t;
}

PurifiedCircuit build_purified_circuit(const DissipativeLindbladSpec& spec,
                                       double t, double epsilon,
                                       CircuitMode mode) {
    spec.validate();
    if (mode == CircuitMode::theorem2 && !spec.pauli_form()) {
        throw std::invalid_argument(
            "build_purified_circuit: theorem2 mode requires Pauli-form jumps");
    }
    PurifiedCircuit c;
    c.mode = mode;
    c.plan = make_truncation_plan(spec.lindblad_norm() * t, epsilon);
    c.num_jumps = spec.jump_count();
    c.num_blocks = spec.pauli_form() ? spec.block_count() : 1;
    c.index_width = ceil_log2(c.num_jumps + 1);
    c.system_width = ceil_log2(static_cast<std::size_t>(spec.jump_dense(0).rows()));

    const int K = c.plan.K;
    const auto M = static_cast<int>(c.num_jumps);
    const int w = c.index_width;
    const int code_width =
        4 * static_cast<int>(c.num_blocks) * spec.num_qubits;

    int offset = 0;
    auto add_register = [&](std::string name, int width) {
        c.registers.push_back({std::move(name), width, offset});
        offset += width;
        return static_cast<int>(c.registers.size()) - 1;
    };
    const int reg_a = add_register("a", K);
    std::vector<int> reg_b(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        reg_b[static_cast<std::size_t>(k)] = add_register("b" + std::to_string(k + 1), w);
    }
    std::vector<int> reg_c;
    if (mode == CircuitMode::theorem2) {
        // K leaf code registers plus K-1 internal tree nodes.
        for (int k = 0; k < K; ++k) {
            reg_c.push_back(add_register("c" + std::to_string(k + 1), code_width));
        }
        for (int k = 0; k + 1 < K; ++k) {
            reg_c.push_back(add_register("d" + std::to_string(k + 1), code_width));
        }
    }
    const int reg_sys = add_register("system", c.system_width);

    const std::size_t u_t =
        (c.gates.push_back({GateKind::prepare_count, 1, {reg_a}, {}}),
         c.gates.size() - 1);
    std::vector<std::size_t> prep(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        c.gates.push_back({GateKind::jump_prep, M,
                           {reg_a, reg_b[static_cast<std::size_t>(k)]},
                           {u_t}});
        prep[static_cast<std::size_t>(k)] = c.gates.size() - 1;
    }

    if (mode == CircuitMode::theorem1) {
        std::size_t prev = u_t;
        for (int k = 0; k < K; ++k) {
            std::vector<std::size_t> preds{prep[static_cast<std::size_t>(k)]};
            if (k > 0) preds.push_back(prev);
            c.gates.push_back({GateKind::select_jump, M,
                               {reg_b[static_cast<std::size_t>(k)], reg_sys},
                               std::move(preds)});
            prev = c.gates.size() - 1;
        }
        return c;
    }

    // theorem2: all V_F in parallel, a log-depth U_P reduction, then T_F.
    std::vector<std::size_t> level(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        c.gates.push_back({GateKind::encode_jump, M,
                           {reg_b[static_cast<std::size_t>(k)],
                            reg_c[static_cast<std::size_t>(k)]},
                           {prep[static_cast<std::size_t>(k)]}});
        level[static_cast<std::size_t>(k)] = c.gates.size() - 1;
    }
    std::size_t next_work = static_cast<std::size_t>(K);
    while (level.size() > 1) {
        std::vector<std::size_t> next;
        next.reserve((level.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
            const int out = reg_c[next_work++];
            c.gates.push_back({GateKind::pauli_product, 1, {out},
                               {level[i], level[i + 1]}});
            next.push_back(c.gates.size() - 1);
        }
        if (level.size() % 2 == 1) next.push_back(level.back());
        level.swap(next);
    }
    if (!level.empty()) {
        c.gates.push_back({GateKind::table_apply,
                           static_cast<int>(c.num_blocks), {reg_sys},
                           {level.front()}});
    }
    return c;
}

Matrix simulate_purified_density(const PurifiedCircuit& circuit,
                                 const DissipativeLindbladSpec& spec,
                                 const Vector& psi0, int ceiling_qubits) {
    if (circuit.mode != CircuitMode::theorem1) {
        throw std::invalid_argument(
            "simulate_purified_density: only theorem1 circuits are executable");
    }
    const int total = circuit.total_qubits();
    if (total > ceiling_qubits) {
        throw std::invalid_argument(
            "simulate_purified_density: " + std::to_string(total) +
            " qubits exceeds the ceiling of " + std::to_string(ceiling_qubits));
    }
    const Eigen::Index sys_dim = spec.jump_dense(0).rows();
    if ((Eigen::Index{1} << circuit.system_width) != sys_dim) {
        throw std::invalid_argument(
            "simulate_purified_density: system dimension is not a power of two");
    }
    if (psi0.size() != sys_dim || std::abs(psi0.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument(
            "simulate_purified_density: input must be a normalized system state");
    }
    const int K = circuit.plan.K;
    const int w = circuit.index_width;
    const auto M = spec.jump_count();
    const auto p = spec.probabilities();

    const Eigen::Index dim = Eigen::Index{1} << total;
    Vector state = Vector::Zero(dim);
    // |0...0>_anc (x) |psi0>: system occupies the least significant bits.
    for (Eigen::Index s = 0; s < sys_dim; ++s) state(s) = psi0(s);

    // U_T: unary count state C sum_k sqrt(e^{-T} T^k / k!) |1^k 0^{K-k}>_a.
    if (K > 0) {
        const Eigen::Index a_dim = Eigen::Index{1} << K;
        Vector target = Vector::Zero(a_dim);
        double term = std::exp(-circuit.plan.T);
        for (int k = 0; k <= K; ++k) {
            const Eigen::Index idx = (Eigen::Index{1} << K) -
                                     (Eigen::Index{1} << (K - k));
            target(idx) = circuit.plan.C * std::sqrt(term);
            term *= circuit.plan.T / static_cast<double>(k + 1);
        }
        std::vector<int> a_qubits(static_cast<std::size_t>(K));
        for (int q = 0; q < K; ++q) a_qubits[static_cast<std::size_t>(q)] = q;
        apply_gate_inplace(state, total, unitary_from_state(target), a_qubits);
    }

    // Controlled U_g: on a_k = 1, prepare sum_i sqrt(p_i) |i>_{b_k} (i >= 1).
    const Eigen::Index b_dim = Eigen::Index{1} << w;
    Vector g = Vector::Zero(b_dim);
    for (std::size_t i = 0; i < M; ++i) {
        g(static_cast<Eigen::Index>(i + 1)) = std::sqrt(p[i]);
    }
    const Matrix u_g = unitary_from_state(g);
    Matrix controlled_g = Matrix::Identity(2 * b_dim, 2 * b_dim);
    controlled_g.block(b_dim, b_dim, b_dim, b_dim) = u_g;

    // U_F: |0><0| (x) I plus sum_i |i><i| (x) F_i (unused codes act as I).
    const Eigen::Index sel_dim = b_dim * sys_dim;
    Matrix u_f = Matrix::Identity(sel_dim, sel_dim);
    for (std::size_t i = 0; i < M; ++i) {
        const auto v = static_cast<Eigen::Index>(i + 1);
        u_f.block(v * sys_dim, v * sys_dim, sys_dim, sys_dim) = spec.jump_dense(i);
    }

    for (int k = 0; k < K; ++k) {
        std::vector<int> qubits{k};
        const int b_offset = K + k * w;
        for (int q = 0; q < w; ++q) qubits.push_back(b_offset + q);
        apply_gate_inplace(state, total, controlled_g, qubits);
    }
    for (int k = 0; k < K; ++k) {
        std::vector<int> qubits;
        const int b_offset = K + k * w;
        for (int q = 0; q < w; ++q) qubits.push_back(b_offset + q);
        for (int q = 0; q < circuit.system_width; ++q) {
            qubits.push_back(total - circuit.system_width + q);
        }
        apply_gate_inplace(state, total, u_f, qubits);
    }

    // Trace out the environment directly from the pure state: with the system
    // least significant, rho(a,b) = sum_e psi(e,a) conj(psi(e,b)).
    const Eigen::Index env_dim = dim / sys_dim;
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>
        psi(state.data(), env_dim, sys_dim);
    return psi.transpose() * psi.conjugate();
}

}  // namespace dissim

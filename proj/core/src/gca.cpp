#include "dissim/gca.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dissim {

namespace {

Matrix gate_matrix(const std::string& name) {
    using namespace std::complex_literals;
    if (name == "H") {
        Matrix h(2, 2);
        const double s = 1.0 / std::numbers::sqrt2;
        h << s, s, s, -s;
        return h;
    }
    if (name == "S") {
        Matrix s(2, 2);
        s << 1, 0, 0, 1i;
        return s;
    }
    if (name == "T") {
        Matrix t(2, 2);
        t << 1, 0, 0, std::exp(Complex(0.0, std::numbers::pi / 4));
        return t;
    }
    if (name == "CNOT") {
        Matrix c(4, 4);
        c << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0;
        return c;
    }
    throw std::invalid_argument("unsupported gate '" + name + "'");
}

Vector plus_state(int qubits) {
    const Eigen::Index d = Eigen::Index{1} << qubits;
    return Vector::Constant(d, Complex(1.0 / std::sqrt(static_cast<double>(d)), 0));
}

GcaProblem normalized_copy(const GcaProblem& problem) {
    GcaProblem p = problem;
    p.validate();
    p.normalize();
    return p;
}

// X or Y expectation on the block qubit (qubit 0 of the n+1 qubit state).
double block_expectation(const Matrix& rho, int n, bool imag_axis) {
    const Eigen::Index dn = Eigen::Index{1} << n;
    // Tr((X (x) I) rho) = 2 Re tr(top-right); Tr((Y (x) I) rho) = 2 Im.
    const Complex tr = rho.topRightCorner(dn, dn).trace();
    return imag_axis ? 2.0 * tr.imag() : 2.0 * tr.real();
}

void flag_boundary(GcaEstimate& e, const GcaProblem& p) {
    const double bound = 1.0 / e.amplification_factor;
    e.near_boundary =
        std::max(std::abs(e.re), std::abs(e.im)) > bound - 2.0 * p.epsilon;
}

// Appends a Kraus stage to a purification, env index most significant and
// padded to a power of two.
Vector purify_stage(const Vector& psi, const KrausChannel& channel,
                    Eigen::Index sys_dim) {
    const Eigen::Index env_old = psi.size() / sys_dim;
    Eigen::Index env_new = 1;
    while (env_new < static_cast<Eigen::Index>(channel.ops.size())) env_new *= 2;
    Vector out = Vector::Zero(env_new * env_old * sys_dim);
    for (std::size_t i = 0; i < channel.ops.size(); ++i) {
        const Matrix& a = channel.ops[i];
        for (Eigen::Index e = 0; e < env_old; ++e) {
            out.segment((static_cast<Eigen::Index>(i) * env_old + e) * sys_dim,
                        sys_dim) = a * psi.segment(e * sys_dim, sys_dim);
        }
    }
    return out;
}

// Projector onto |+><+| (real axis) or |y+><y+| (imag axis) on the block
// qubit of every system slice.
Vector project_block(const Vector& psi, Eigen::Index sys_dim, bool imag_axis) {
    const Eigen::Index dn = sys_dim / 2;
    const Complex c = imag_axis ? Complex(0.0, 1.0) : Complex(1.0, 0.0);
    Vector out(psi.size());
    for (Eigen::Index e = 0; e < psi.size() / sys_dim; ++e) {
        const auto top = psi.segment(e * sys_dim, dn);
        const auto bot = psi.segment(e * sys_dim + dn, dn);
        // (|v><v| (x) I) with |v> = (|0> + c|1>)/sqrt(2).
        const Vector mix = 0.5 * (top + std::conj(c) * bot);
        out.segment(e * sys_dim, dn) = mix;
        out.segment(e * sys_dim + dn, dn) = c * mix;
    }
    return out;
}

AmplitudeProblem overlap_problem(const Vector& psi, const Vector& projected,
                                 double epsilon, double delta) {
    const Eigen::Index n = psi.size();
    AmplitudeProblem out;
    out.s1 = Vector::Zero(2 * n);
    out.s1.head(n) = psi;
    out.s2 = Vector::Zero(2 * n);
    out.s2.head(n) = projected;
    out.s2.tail(n) = psi - projected;
    out.epsilon = epsilon;
    out.delta = delta;
    return out;
}

}  // namespace

double GcaProblem::coeff_sum() const {
    double s = 0.0;
    for (const auto& t : hamiltonian) s += t.coeff;
    return s;
}

double GcaProblem::normalize() {
    const double s = coeff_sum();
    if (!(s > 0.0)) {
        throw std::invalid_argument("GcaProblem: coefficients must sum to > 0");
    }
    for (auto& t : hamiltonian) t.coeff /= s;
    beta *= s;
    return s;
}

int GcaProblem::hadamard_count() const {
    int count = 0;
    for (const auto& g : u1_gates) count += g.g == "H";
    for (const auto& g : u2_gates) count += g.g == "H";
    return count;
}

int GcaProblem::circuit_depth() const {
    return static_cast<int>(u1_gates.size() + u2_gates.size());
}

double GcaProblem::amplification_factor() const {
    return std::pow(2.0, 0.5 * (n - hadamard_count()));
}

Matrix GcaProblem::hamiltonian_dense() const {
    const Eigen::Index d = Eigen::Index{1} << n;
    check_dense_ceiling(d);
    Matrix h = Matrix::Zero(d, d);
    for (const auto& t : hamiltonian) h += t.coeff * t.pauli.to_dense();
    return h;
}

void GcaProblem::validate() const {
    if (n <= 0) throw std::invalid_argument("GcaProblem: n must be positive");
    if (hamiltonian.empty()) {
        throw std::invalid_argument("GcaProblem: empty Hamiltonian");
    }
    if (!(beta >= 0.0)) throw std::invalid_argument("GcaProblem: beta must be >= 0");
    if (!(epsilon > 0.0) || !(delta > 0.0)) {
        throw std::invalid_argument("GcaProblem: epsilon and delta must be positive");
    }
    for (const auto& t : hamiltonian) {
        if (!(t.coeff >= 0.0)) {
            throw std::invalid_argument("GcaProblem: coefficients must be >= 0");
        }
        if (t.pauli.num_qubits() != static_cast<std::uint32_t>(n)) {
            throw std::invalid_argument("GcaProblem: Pauli term width mismatch");
        }
        const auto code = t.pauli.phase().code;
        if (code != 0 && code != 2) {
            throw std::invalid_argument("GcaProblem: Pauli terms must carry real signs");
        }
    }
    for (const auto* list : {&u1_gates, &u2_gates}) {
        for (const auto& g : *list) {
            const Matrix m = gate_matrix(g.g);
            const auto want = static_cast<std::size_t>(m.rows() == 4 ? 2 : 1);
            if (g.q.size() != want) {
                throw std::invalid_argument("GcaProblem: gate arity mismatch for " + g.g);
            }
            for (int q : g.q) {
                if (q < 0 || q >= n) {
                    throw std::invalid_argument("GcaProblem: gate qubit out of range");
                }
            }
        }
    }
}

DissipativeLindbladSpec gibbs_lindbladian(const GcaProblem& problem) {
    const GcaProblem p = normalized_copy(problem);
    DissipativeLindbladSpec spec;
    spec.num_qubits = p.n;
    for (const auto& term : p.hamiltonian) {
        const auto [p0, p1] =
            hamiltonian_jump_construction(term.pauli.hadamard_conjugated());
        spec.jumps.push_back({term.coeff, BlockDiagPauli({p0, p1})});
    }
    spec.validate();
    return spec;
}

Matrix circuit_unitary(const std::vector<CircuitGate>& gates, int n) {
    const Eigen::Index d = Eigen::Index{1} << n;
    check_dense_ceiling(d);
    Matrix u = Matrix::Identity(d, d);
    for (const auto& g : gates) {
        u = embed_gate(gate_matrix(g.g), g.q, n) * u;
    }
    return u;
}

std::vector<CircuitGate> adjoint_gates(const std::vector<CircuitGate>& gates) {
    std::vector<CircuitGate> out;
    out.reserve(gates.size());
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        if (it->g == "S") {
            out.insert(out.end(), 3, {"S", it->q});
        } else if (it->g == "T") {
            out.insert(out.end(), 7, {"T", it->q});
        } else {
            out.push_back(*it);  // H and CNOT are self-inverse
        }
    }
    return out;
}

std::complex<double> exact_gca_oracle(const GcaProblem& problem) {
    const GcaProblem p = normalized_copy(problem);
    if (p.n > 8) throw std::invalid_argument("exact_gca_oracle: n exceeds 8");
    const Eigen::Index d = Eigen::Index{1} << p.n;
    const Matrix h = p.hamiltonian_dense();
    const Matrix decay = expm(-p.beta * (h + Matrix::Identity(d, d)));
    const Vector psi1 = circuit_unitary(p.u1_gates, p.n) * plus_state(p.n);
    const Vector psi2 = circuit_unitary(p.u2_gates, p.n).col(0);
    return psi1.dot(decay * psi2);
}

double simulation_epsilon(const GcaProblem& problem) {
    const double raw = 0.5 * problem.amplification_factor() * problem.epsilon;
    return std::clamp(raw, 1e-15, 1.9);
}

Matrix pipeline_density(const GcaProblem& problem, int truncation_k) {
    const GcaProblem p = normalized_copy(problem);
    Matrix rho = ndme_construct(plus_state(p.n), 0.5).rho;
    for (const auto& cbe : per_gate_cbe_channels(p.u2_gates, p.n)) {
        rho = apply_channel(cbe.block_channel(), rho);
    }
    const auto spec = gibbs_lindbladian(p);
    const auto plan =
        forced_truncation_plan(spec.lindblad_norm() * p.beta, truncation_k);
    rho = apply_taylor_channel(spec, plan, rho);
    for (const auto& cbe :
         per_gate_cbe_channels(adjoint_gates(p.u1_gates), p.n)) {
        rho = apply_channel(cbe.block_channel(), rho);
    }
    return rho;
}

GcaEstimate run_pipeline_exact_k(const GcaProblem& problem, int truncation_k) {
    const GcaProblem p = normalized_copy(problem);
    const Matrix rho = pipeline_density(p, truncation_k);
    GcaEstimate e;
    e.method = "exact";
    e.amplification_factor = p.amplification_factor();
    e.raw_x = block_expectation(rho, p.n, false);
    e.raw_y = block_expectation(rho, p.n, true);
    e.re = e.raw_x / e.amplification_factor;
    e.im = e.raw_y / e.amplification_factor;
    flag_boundary(e, p);
    return e;
}

GcaEstimate run_pipeline_exact(const GcaProblem& problem) {
    const GcaProblem p = normalized_copy(problem);
    const int k = truncation_order(p.coeff_sum() * p.beta, simulation_epsilon(p));
    return run_pipeline_exact_k(p, k);
}

GcaEstimate run_pipeline_shots(const GcaProblem& problem, std::size_t shots,
                               std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("run_pipeline_shots: shots must be >= 1");
    const GcaProblem p = normalized_copy(problem);
    GcaEstimate e = run_pipeline_exact(p);
    e.method = "shots";
    e.seed = seed;
    e.raw_x = shot_estimate(e.raw_x, shots, seed);
    e.raw_y = shot_estimate(e.raw_y, shots, seed ^ 0x9e3779b97f4a7c15ull);
    e.re = e.raw_x / e.amplification_factor;
    e.im = e.raw_y / e.amplification_factor;
    e.queries = 2 * shots;
    flag_boundary(e, p);
    return e;
}

GcaEstimate run_pipeline_mlae(const GcaProblem& problem, std::uint64_t seed,
                              int ceiling_qubits) {
    const GcaProblem p = normalized_copy(problem);
    const Eigen::Index sys_dim = Eigen::Index{1} << (p.n + 1);
    // One extra ancilla is appended by the overlap embedding.
    const Eigen::Index cap = Eigen::Index{1} << (ceiling_qubits - 1);

    Vector psi = plus_state(p.n + 1);
    auto stage = [&](const KrausChannel& channel) {
        psi = purify_stage(psi, channel, sys_dim);
        if (psi.size() > cap) {
            throw std::invalid_argument(
                "run_pipeline_mlae: purification exceeds the qubit ceiling");
        }
    };
    for (const auto& cbe : per_gate_cbe_channels(p.u2_gates, p.n)) {
        stage(cbe.block_channel());
    }
    stage(build_taylor_channel(gibbs_lindbladian(p), p.beta, simulation_epsilon(p)));
    for (const auto& cbe :
         per_gate_cbe_channels(adjoint_gates(p.u1_gates), p.n)) {
        stage(cbe.block_channel());
    }

    GcaEstimate e;
    e.method = "mlae";
    e.seed = seed;
    e.amplification_factor = p.amplification_factor();
    // Amplitude error eps_a maps to 2 eps_a / factor on re/im; spend half the
    // budget on each axis' estimation.
    const double eps_amp =
        std::clamp(0.25 * p.epsilon * e.amplification_factor, 1e-6, 0.49);
    const auto prob_x = overlap_problem(psi, project_block(psi, sys_dim, false),
                                        eps_amp, p.delta / 2);
    const auto prob_y = overlap_problem(psi, project_block(psi, sys_dim, true),
                                        eps_amp, p.delta / 2);
    const auto rep_x = mlae_estimate(prob_x, seed);
    const auto rep_y = mlae_estimate(prob_y, seed ^ 0x9e3779b97f4a7c15ull);
    e.raw_x = 2.0 * rep_x.estimate - 1.0;
    e.raw_y = 2.0 * rep_y.estimate - 1.0;
    e.re = e.raw_x / e.amplification_factor;
    e.im = e.raw_y / e.amplification_factor;
    e.queries = rep_x.queries + rep_y.queries;
    flag_boundary(e, p);
    return e;
}

}  // namespace dissim

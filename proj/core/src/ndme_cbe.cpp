#include "dissim/ndme_cbe.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace dissim {

namespace {

Matrix pauli2(char c) {
    return PauliString::parse(std::string(1, c)).to_dense();
}

Matrix hadamard_dense(int n) {
    Matrix h1(2, 2);
    const double s = 1.0 / std::numbers::sqrt2;
    h1 << s, s, s, -s;
    Matrix h = Matrix::Identity(1, 1);
    for (int q = 0; q < n; ++q) h = kron(h, h1);
    return h;
}

// Normalized Walsh-Hadamard transform of a length-2^n vector, in place.
void walsh_hadamard(Vector& v) {
    const Eigen::Index d = v.size();
    for (Eigen::Index half = 1; half < d; half *= 2) {
        for (Eigen::Index base = 0; base < d; base += 2 * half) {
            for (Eigen::Index i = base; i < base + half; ++i) {
                const Complex a = v(i);
                const Complex b = v(i + half);
                v(i) = (a + b) / std::numbers::sqrt2;
                v(i + half) = (a - b) / std::numbers::sqrt2;
            }
        }
    }
}

int qubit_count_of(Eigen::Index dim) {
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) ++n;
    if ((Eigen::Index{1} << n) != dim) {
        throw std::invalid_argument("dimension is not a power of two");
    }
    return n;
}

double l1_norm(const Vector& v) { return v.cwiseAbs().sum(); }

CbePair embedded(const CbePair& p, const std::vector<int>& qubits, int n) {
    return {embed_gate(p.K, qubits, n), embed_gate(p.L, qubits, n)};
}

}  // namespace

Matrix bell_rotation(int n) {
    if (n <= 0) throw std::invalid_argument("bell_rotation: n must be positive");
    check_dense_ceiling(Eigen::Index{1} << (2 * n));
    Matrix cnot(4, 4);
    cnot << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0;
    const Matrix u_b2 = kron(hadamard_dense(1), Matrix::Identity(2, 2)) * cnot;
    Matrix u = Matrix::Identity(Eigen::Index{1} << (2 * n),
                                Eigen::Index{1} << (2 * n));
    for (int q = 0; q < n; ++q) {
        u = embed_gate(u_b2, {q, n + q}, 2 * n) * u;
    }
    return u;
}

Matrix pqc_encode(const Vector& state) {
    const Eigen::Index d = state.size();
    const int n = qubit_count_of(d);
    if (std::abs(state.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("pqc_encode: state must be normalized");
    }
    const double scale = std::pow(2.0, -0.5 * n);
    Matrix s(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
            s(a, b) = scale * state(a ^ b);
        }
    }
    return s;
}

Vector pqc_decode(const Matrix& s) {
    const Eigen::Index d = s.rows();
    const int n = qubit_count_of(d);
    // c_i = 2^{-n/2} tr(P_i S), and each diagonal entry of P_i S is
    // S(a xor i, a) = 2^{-n/2} c_i.
    const double scale = std::pow(2.0, -0.5 * n);
    Vector c(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        Complex acc = 0;
        for (Eigen::Index a = 0; a < d; ++a) acc += s(a ^ i, a);
        c(i) = scale * acc;
    }
    return c;
}

double gamma_upper_bound(const Vector& state) {
    if (std::abs(state.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("gamma_upper_bound: state must be normalized");
    }
    Vector h = state;
    walsh_hadamard(h);
    return 1.0 / (2.0 * l1_norm(h));
}

NdmeState ndme_construct(const Vector& state, double gamma) {
    const Eigen::Index d = state.size();
    const int n = qubit_count_of(d);
    if (gamma < 0.0) throw std::invalid_argument("ndme_construct: gamma must be >= 0");
    Vector chi = state;
    walsh_hadamard(chi);
    const double chi_l1 = l1_norm(chi);
    const double slack = 1.0 - 2.0 * gamma * chi_l1;
    if (slack < -1e-12) {
        throw std::invalid_argument(
            "ndme_construct: gamma exceeds the feasibility bound 1/(2||H|S>||_1)");
    }
    const double fill = std::max(slack, 0.0) / static_cast<double>(2 * d);
    // Rotated frame: rho' = (diag(r), gamma diag(chi); h.c., diag(r)) with
    // r_j = gamma|chi_j| + fill, PSD by the 2x2 block eigenvalues r +- gamma|chi|.
    Matrix rho_rot = Matrix::Zero(2 * d, 2 * d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const double r = gamma * std::abs(chi(j)) + fill;
        rho_rot(j, j) = r;
        rho_rot(d + j, d + j) = r;
        rho_rot(j, d + j) = gamma * chi(j);
        rho_rot(d + j, j) = gamma * std::conj(chi(j));
    }
    const Matrix w = kron(Matrix::Identity(2, 2), hadamard_dense(n));
    NdmeState out;
    out.n = n;
    out.gamma = gamma;
    out.encoded_S = pqc_encode(state);
    out.rho = w * rho_rot * w;
    return out;
}

double CbeChannel::cptp_residual() const {
    if (pairs.empty()) throw std::invalid_argument("CbeChannel: no Kraus pairs");
    const Eigen::Index d = pairs.front().K.rows();
    Matrix sk = Matrix::Zero(d, d);
    Matrix sl = Matrix::Zero(d, d);
    for (const auto& p : pairs) {
        sk += p.K.adjoint() * p.K;
        sl += p.L.adjoint() * p.L;
    }
    const Matrix id = Matrix::Identity(d, d);
    return std::max((sk - id).cwiseAbs().maxCoeff(),
                    (sl - id).cwiseAbs().maxCoeff());
}

KrausChannel CbeChannel::block_channel() const {
    const Eigen::Index d = pairs.front().K.rows();
    KrausChannel c;
    c.ops.reserve(pairs.size());
    for (const auto& p : pairs) {
        Matrix op = Matrix::Zero(2 * d, 2 * d);
        op.topLeftCorner(d, d) = p.K;
        op.bottomRightCorner(d, d) = p.L;
        c.ops.push_back(std::move(op));
    }
    return c;
}

CbeChannel gate_cbe(CbeGate gate) {
    using namespace std::complex_literals;
    const Matrix I2 = Matrix::Identity(2, 2);
    const Matrix X = pauli2('X');
    const Matrix Y = pauli2('Y');
    const Matrix Z = pauli2('Z');
    const Matrix H = hadamard_dense(1);
    const double s2 = std::numbers::sqrt2;

    CbeChannel c;
    c.n = 1;
    c.eta = 1.0;
    switch (gate) {
        case CbeGate::X:
            c.encoded_op = X;
            c.pairs = {{I2, X}};
            break;
        case CbeGate::Y:
            c.encoded_op = Y;
            c.pairs = {{Z, -Y}};
            break;
        case CbeGate::Z:
            c.encoded_op = Z;
            c.pairs = {{Z, Z}};
            break;
        case CbeGate::H:
            c.encoded_op = H;
            c.eta = 1.0 / s2;
            c.pairs = {{0.5 * I2, 0.5 * X},
                       {0.5 * Z, 0.5 * Z},
                       {0.5 * X, 0.5 * I2},
                       {0.5 * Y, 0.5 * Y}};
            break;
        case CbeGate::HSH: {
            Matrix m1(2, 2), m2(2, 2);
            m1 << 1.0 + 1i, 1.0 - 1i, 1.0 - 1i, 1.0 + 1i;
            m2 << 1.0 - 1i, 1.0 + 1i, 1.0 + 1i, 1.0 - 1i;
            m1 *= 0.5;
            m2 *= 0.5;
            c.encoded_op = m1;  // HSH itself
            // L enters conjugated, and conj(m2) == m1.
            c.pairs = {{I2 / s2, m2 / s2}, {X / s2, m1 / s2}};
            break;
        }
        case CbeGate::HTH: {
            const Complex w = std::exp(Complex(0.0, std::numbers::pi / 4));
            Matrix m1(2, 2), m2(2, 2);
            m1 << 1.0 + w, 1.0 - w, 1.0 - w, 1.0 + w;
            m2 << 1.0 - w, 1.0 + w, 1.0 + w, 1.0 - w;
            m1 *= 0.5;
            m2 *= 0.5;
            c.encoded_op = m1;  // HTH itself
            // L enters conjugated.
            c.pairs = {{I2 / s2, Matrix(m1.conjugate()) / s2},
                       {X / s2, Matrix(m2.conjugate()) / s2}};
            break;
        }
        case CbeGate::CNOT_HAD: {
            c.n = 2;
            Matrix cnot(4, 4);
            cnot << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0;
            const Matrix hh = kron(H, H);
            c.encoded_op = hh * cnot * hh;
            // The encoded op equals the reversed CNOT, a permutation of the
            // I/X words. A single Kraus pair carrying that permutation on
            // both blocks realizes it exactly: K X^c K^dag walks the words.
            Matrix rev(4, 4);
            rev << 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0;
            c.pairs = {{rev, rev}};
            break;
        }
    }
    return c;
}

CbeVerification verify_cbe(const CbeChannel& c, double tol) {
    if (c.pairs.empty()) throw std::invalid_argument("verify_cbe: no Kraus pairs");
    const Eigen::Index d = Eigen::Index{1} << c.n;
    const Matrix u_b = bell_rotation(c.n);
    Matrix s = Matrix::Zero(d * d, d * d);
    for (const auto& p : c.pairs) s += kron(p.K, p.L.conjugate());
    const Matrix a = u_b * s * u_b.adjoint();
    const Matrix b = a.topLeftCorner(d, d);
    CbeVerification v;
    v.residual = (b - c.eta * c.encoded_op).cwiseAbs().maxCoeff();
    const Matrix b2 = (a * a).topLeftCorner(d, d);
    v.strong_residual = (b2 - b * b).cwiseAbs().maxCoeff();
    const Tolerances tols;
    v.pass = v.residual <= tol && v.strong_residual <= tol &&
             c.cptp_residual() <= tols.cptp;
    return v;
}

CbeChannel compose_cbe(const CbeChannel& c2, const CbeChannel& c1) {
    if (c1.n != c2.n) {
        throw std::invalid_argument("compose_cbe: qubit count mismatch");
    }
    if (!verify_cbe(c1).pass || !verify_cbe(c2).pass) {
        throw std::invalid_argument("compose_cbe: inputs must verify as strong CBEs");
    }
    CbeChannel out;
    out.n = c1.n;
    out.eta = c1.eta * c2.eta;
    out.encoded_op = c2.encoded_op * c1.encoded_op;
    out.pairs.reserve(c1.pairs.size() * c2.pairs.size());
    for (const auto& p2 : c2.pairs) {
        for (const auto& p1 : c1.pairs) {
            out.pairs.push_back({p2.K * p1.K, p2.L * p1.L});
        }
    }
    return out;
}

std::vector<CbeChannel> per_gate_cbe_channels(
    const std::vector<CircuitGate>& gates, int n) {
    std::vector<CbeChannel> out;
    out.reserve(gates.size());
    for (const auto& g : gates) {
        CbeChannel base;
        if (g.g == "H") {
            base = gate_cbe(CbeGate::H);
        } else if (g.g == "S") {
            base = gate_cbe(CbeGate::HSH);
        } else if (g.g == "T") {
            base = gate_cbe(CbeGate::HTH);
        } else if (g.g == "CNOT") {
            base = gate_cbe(CbeGate::CNOT_HAD);
        } else {
            throw std::invalid_argument("unsupported gate '" + g.g + "'");
        }
        if (static_cast<int>(g.q.size()) != base.n) {
            throw std::invalid_argument("gate '" + g.g + "' expects " +
                                        std::to_string(base.n) + " qubit(s)");
        }
        CbeChannel layer;
        layer.n = n;
        layer.eta = base.eta;
        layer.encoded_op = embed_gate(base.encoded_op, g.q, n);
        layer.pairs.reserve(base.pairs.size());
        for (const auto& p : base.pairs) layer.pairs.push_back(embedded(p, g.q, n));
        out.push_back(std::move(layer));
    }
    return out;
}

CbeChannel compile_circuit_cbe(const std::vector<CircuitGate>& gates, int n,
                               std::size_t pair_cap) {
    CbeChannel total;
    total.n = n;
    total.eta = 1.0;
    total.encoded_op = identity(Eigen::Index{1} << n);
    total.pairs = {{identity(Eigen::Index{1} << n), identity(Eigen::Index{1} << n)}};
    for (const auto& layer : per_gate_cbe_channels(gates, n)) {
        if (total.pairs.size() * layer.pairs.size() > pair_cap) {
            throw std::invalid_argument(
                "compile_circuit_cbe: composed Kraus pair count exceeds the cap; "
                "apply per_gate_cbe_channels sequentially instead");
        }
        total = compose_cbe(layer, total);
    }
    return total;
}

EtaEstimate eta_upper_bound_estimate(const Matrix& u, int starts,
                                     int iterations, std::uint64_t seed) {
    if (!is_unitary(u)) {
        throw std::invalid_argument("eta_upper_bound_estimate: U must be unitary");
    }
    const Eigen::Index d = u.rows();
    const int n = qubit_count_of(d);
    const Matrix h = hadamard_dense(n);
    auto ratio = [&](const Vector& s) {
        return l1_norm(h * s) / l1_norm(h * (u * s));
    };
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_state = [&]() {
        Vector v(d);
        for (Eigen::Index i = 0; i < d; ++i) v(i) = Complex(gauss(rng), gauss(rng));
        v.normalize();
        return v;
    };

    std::vector<Vector> seeds;
    for (Eigen::Index i = 0; i < d; ++i) seeds.push_back(Vector::Unit(d, i));
    seeds.push_back(Vector::Constant(d, Complex(1.0 / std::sqrt(double(d)), 0)));
    while (static_cast<int>(seeds.size()) < starts) seeds.push_back(random_state());

    EtaEstimate best;
    best.value = std::numeric_limits<double>::infinity();
    for (const auto& s0 : seeds) {
        Vector s = s0;
        double f = ratio(s);
        double step = 0.5;
        for (int it = 0; it < iterations; ++it) {
            Vector cand = s;
            for (Eigen::Index i = 0; i < d; ++i) {
                cand(i) += step * Complex(gauss(rng), gauss(rng));
            }
            cand.normalize();
            const double fc = ratio(cand);
            if (fc < f) {
                s = cand;
                f = fc;
            } else {
                step *= 0.99;
            }
        }
        if (f < best.value) {
            best.value = f;
            best.witness = s;
        }
    }
    return best;
}

std::pair<PauliString, PauliString> hamiltonian_jump_construction(
    const PauliString& q_prime) {
    const std::uint8_t sign_code = q_prime.phase().code;
    if (sign_code != 0 && sign_code != 2) {
        throw std::invalid_argument(
            "hamiltonian_jump_construction: Q' must carry a real sign");
    }
    const auto n = q_prime.num_qubits();
    PauliString p0(n), p1(n);
    std::size_t y_count = 0;
    for (std::uint32_t q = 0; q < n; ++q) {
        switch (q_prime.letter(q)) {
            case PauliLetter::I: break;
            case PauliLetter::X:
                p1.set_letter(q, PauliLetter::X);
                break;
            case PauliLetter::Y:
                p0.set_letter(q, PauliLetter::Z);
                p1.set_letter(q, PauliLetter::Y);
                ++y_count;
                break;
            case PauliLetter::Z:
                p0.set_letter(q, PauliLetter::Z);
                p1.set_letter(q, PauliLetter::Z);
                break;
        }
    }
    // conj(P1) contributes (-1)^{#Y}; fold the remaining sign onto P0 so the
    // conjugated product lands on -I (x) Q'.
    unsigned exp = 2;                   // the leading minus sign
    exp += sign_code;                   // the sign of Q'
    exp += 2 * (y_count & 1);           // undo conj(P1)'s sign
    p0.set_phase({static_cast<std::uint8_t>(exp & 3)});

    if ((Eigen::Index{1} << (2 * n)) <= kDenseCeiling) {
        const Matrix u_b = bell_rotation(static_cast<int>(n));
        const Matrix lhs = u_b * kron(p0.to_dense(), p1.to_dense().conjugate()) *
                           u_b.adjoint();
        const Matrix rhs = -kron(identity(Eigen::Index{1} << n),
                                 q_prime.to_dense());
        if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-10) {
            throw std::logic_error(
                "hamiltonian_jump_construction: dense verification failed");
        }
    }
    return {p0, p1};
}

}  // namespace dissim

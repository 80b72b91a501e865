#include "dissim/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace dissim {

void check_dense_ceiling(Eigen::Index dim, Eigen::Index ceiling) {
    if (dim > ceiling) {
        throw std::invalid_argument("dense ceiling exceeded: dim " +
                                    std::to_string(dim) + " > " +
                                    std::to_string(ceiling));
    }
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
        }
    }
    return out;
}

Vector vectorize(const Matrix& o) {
    if (o.rows() != o.cols()) {
        throw std::invalid_argument("vectorize: matrix must be square");
    }
    const Eigen::Index d = o.rows();
    Vector v(d * d);
    for (Eigen::Index i = 0; i < d; ++i) {
        v.segment(i * d, d) = o.row(i).transpose();
    }
    return v;
}

Matrix matrixize(const Vector& v) {
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(
        static_cast<double>(v.size()))));
    if (d * d != v.size()) {
        throw std::invalid_argument("matrixize: length is not a perfect square");
    }
    Matrix o(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        o.row(i) = v.segment(i * d, d).transpose();
    }
    return o;
}

Matrix superop_of_map(std::span<const Matrix> a_list,
                      std::span<const Matrix> b_list) {
    if (a_list.size() != b_list.size() || a_list.empty()) {
        throw std::invalid_argument("superop_of_map: mismatched operator lists");
    }
    const Eigen::Index d = a_list[0].rows();
    for (std::size_t i = 0; i < a_list.size(); ++i) {
        if (a_list[i].rows() != d || a_list[i].cols() != d ||
            b_list[i].rows() != d || b_list[i].cols() != d) {
            throw std::invalid_argument("superop_of_map: shape mismatch");
        }
    }
    check_dense_ceiling(d * d);
    Matrix s = Matrix::Zero(d * d, d * d);
    for (std::size_t i = 0; i < a_list.size(); ++i) {
        s += kron(a_list[i], b_list[i].conjugate());
    }
    return s;
}

Matrix expm(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("expm: matrix must be square");
    }
    if (!m.allFinite()) {
        throw std::invalid_argument("expm: non-finite entries");
    }
    return m.exp();
}

Eigen::Index KrausChannel::dim() const {
    if (ops.empty()) throw std::invalid_argument("KrausChannel: no operators");
    return ops.front().rows();
}

double KrausChannel::cptp_residual() const {
    const Eigen::Index d = dim();
    Matrix s = Matrix::Zero(d, d);
    for (const auto& a : ops) s += a.adjoint() * a;
    return (s - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

Matrix KrausChannel::superoperator() const {
    std::vector<Matrix> a(ops.begin(), ops.end());
    return superop_of_map(a, a);
}

Matrix apply_channel(const KrausChannel& c, const Matrix& rho,
                     const Tolerances& tol) {
    const Eigen::Index d = c.dim();
    if (rho.rows() != d || rho.cols() != d) {
        throw std::invalid_argument("apply_channel: dimension mismatch");
    }
    if (c.cptp_residual() > tol.cptp) {
        throw std::invalid_argument("apply_channel: channel is not CPTP within tolerance");
    }
    Matrix out = Matrix::Zero(d, d);
    for (const auto& a : c.ops) out += a * rho * a.adjoint();
    return out;
}

Matrix choi_state(const KrausChannel& c) {
    const Eigen::Index d = c.dim();
    check_dense_ceiling(d * d);
    // (A (x) I) |Omega> = vec(A)/sqrt(d), so the Choi state is
    // (1/d) sum_k vec(A_k) vec(A_k)^dag.
    Matrix choi = Matrix::Zero(d * d, d * d);
    for (const auto& a : c.ops) {
        const Vector v = vectorize(a);
        choi += v * v.adjoint();
    }
    return choi / static_cast<double>(d);
}

Matrix choi_of_superop(const Matrix& s) {
    const auto d2 = s.rows();
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(
        static_cast<double>(d2))));
    if (d * d != d2 || s.cols() != d2) {
        throw std::invalid_argument("choi_of_superop: not a superoperator shape");
    }
    Matrix choi(d2, d2);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            const Matrix m = matrixize(s.col(i * d + j));
            for (Eigen::Index r = 0; r < d; ++r) {
                for (Eigen::Index c = 0; c < d; ++c) {
                    choi(r * d + i, c * d + j) = m(r, c);
                }
            }
        }
    }
    return choi / static_cast<double>(d);
}

double trace_norm_hermitian(const Matrix& m) {
    const Matrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

double choi_trace_distance(const KrausChannel& c1, const KrausChannel& c2) {
    if (c1.dim() != c2.dim()) {
        throw std::invalid_argument("choi_trace_distance: dimension mismatch");
    }
    return trace_norm_hermitian(choi_state(c1) - choi_state(c2));
}

double choi_trace_distance(const Matrix& superop1, const Matrix& superop2) {
    if (superop1.rows() != superop2.rows()) {
        throw std::invalid_argument("choi_trace_distance: dimension mismatch");
    }
    return trace_norm_hermitian(choi_of_superop(superop1) -
                                choi_of_superop(superop2));
}

Matrix partial_trace(const Matrix& rho, int total_qubits,
                     const std::vector<int>& keep) {
    const Eigen::Index dim = Eigen::Index{1} << total_qubits;
    if (rho.rows() != dim || rho.cols() != dim) {
        throw std::invalid_argument("partial_trace: dimension mismatch");
    }
    std::vector<bool> kept(total_qubits, false);
    for (int q : keep) {
        if (q < 0 || q >= total_qubits) {
            throw std::out_of_range("partial_trace: qubit index out of range");
        }
        kept[q] = true;
    }
    const int nk = static_cast<int>(keep.size());
    const int nt = total_qubits - nk;
    // Qubit 0 is the most significant bit of the index.
    std::vector<Eigen::Index> keep_weight(nk), trace_weight(nt);
    {
        int t = 0;
        for (int q = 0, k = 0; q < total_qubits; ++q) {
            const Eigen::Index w = Eigen::Index{1} << (total_qubits - 1 - q);
            if (kept[q]) {
                keep_weight[k++] = w;
            } else {
                trace_weight[t++] = w;
            }
        }
    }
    const Eigen::Index dk = Eigen::Index{1} << nk;
    const Eigen::Index dt = Eigen::Index{1} << nt;
    auto expand = [](Eigen::Index bits, const std::vector<Eigen::Index>& w) {
        Eigen::Index idx = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if ((bits >> (w.size() - 1 - i)) & 1) idx |= w[i];
        }
        return idx;
    };
    Matrix out = Matrix::Zero(dk, dk);
    for (Eigen::Index a = 0; a < dk; ++a) {
        const Eigen::Index ra = expand(a, keep_weight);
        for (Eigen::Index b = 0; b < dk; ++b) {
            const Eigen::Index rb = expand(b, keep_weight);
            Complex sum = 0;
            for (Eigen::Index e = 0; e < dt; ++e) {
                const Eigen::Index re = expand(e, trace_weight);
                sum += rho(ra | re, rb | re);
            }
            out(a, b) = sum;
        }
    }
    return out;
}

Matrix stinespring_isometry(const KrausChannel& c, const Tolerances& tol) {
    if (c.cptp_residual() > tol.cptp) {
        throw std::invalid_argument("stinespring_isometry: channel is not CPTP");
    }
    const Eigen::Index d = c.dim();
    Eigen::Index env = 1;
    while (env < static_cast<Eigen::Index>(c.ops.size())) env *= 2;
    Matrix v = Matrix::Zero(env * d, d);
    for (std::size_t i = 0; i < c.ops.size(); ++i) {
        v.block(static_cast<Eigen::Index>(i) * d, 0, d, d) = c.ops[i];
    }
    return v;
}

bool is_density_matrix(const Matrix& rho, const Tolerances& tol) {
    if (rho.rows() != rho.cols()) return false;
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol.herm) return false;
    if (std::abs(rho.trace() - Complex{1.0}) > tol.trace) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()),
                                             Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol.psd;
}

bool is_unitary(const Matrix& u, double tol) {
    if (u.rows() != u.cols()) return false;
    return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()))
               .cwiseAbs()
               .maxCoeff() <= tol;
}

Matrix identity(Eigen::Index dim) { return Matrix::Identity(dim, dim); }

Matrix embed_gate(const Matrix& gate, const std::vector<int>& gate_qubits,
                  int total_qubits) {
    const int k = static_cast<int>(gate_qubits.size());
    const Eigen::Index gd = Eigen::Index{1} << k;
    if (gate.rows() != gd || gate.cols() != gd) {
        throw std::invalid_argument("embed_gate: gate size does not match qubit list");
    }
    for (int q : gate_qubits) {
        if (q < 0 || q >= total_qubits) {
            throw std::out_of_range("embed_gate: qubit index out of range");
        }
    }
    const Eigen::Index dim = Eigen::Index{1} << total_qubits;
    check_dense_ceiling(dim);
    std::vector<Eigen::Index> weight(k);
    for (int i = 0; i < k; ++i) {
        weight[i] = Eigen::Index{1} << (total_qubits - 1 - gate_qubits[i]);
    }
    Matrix out = Matrix::Zero(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        Eigen::Index gr = 0, rest = r;
        for (int i = 0; i < k; ++i) {
            if (r & weight[i]) gr |= Eigen::Index{1} << (k - 1 - i);
            rest &= ~weight[i];
        }
        for (Eigen::Index gc = 0; gc < gd; ++gc) {
            Eigen::Index c = rest;
            for (int i = 0; i < k; ++i) {
                if ((gc >> (k - 1 - i)) & 1) c |= weight[i];
            }
            out(r, c) = gate(gr, gc);
        }
    }
    return out;
}

void apply_gate_inplace(Vector& state, int total_qubits, const Matrix& gate,
                        const std::vector<int>& gate_qubits) {
    const int k = static_cast<int>(gate_qubits.size());
    const Eigen::Index gd = Eigen::Index{1} << k;
    if (gate.rows() != gd || gate.cols() != gd) {
        throw std::invalid_argument("apply_gate_inplace: gate size mismatch");
    }
    const Eigen::Index dim = Eigen::Index{1} << total_qubits;
    if (state.size() != dim) {
        throw std::invalid_argument("apply_gate_inplace: state size mismatch");
    }
    std::vector<Eigen::Index> weight(k);
    Eigen::Index mask = 0;
    for (int i = 0; i < k; ++i) {
        const int q = gate_qubits[i];
        if (q < 0 || q >= total_qubits) {
            throw std::out_of_range("apply_gate_inplace: qubit index out of range");
        }
        weight[i] = Eigen::Index{1} << (total_qubits - 1 - q);
        mask |= weight[i];
    }
    Vector local(gd);
    for (Eigen::Index base = 0; base < dim; ++base) {
        if (base & mask) continue;
        for (Eigen::Index g = 0; g < gd; ++g) {
            Eigen::Index idx = base;
            for (int i = 0; i < k; ++i) {
                if ((g >> (k - 1 - i)) & 1) idx |= weight[i];
            }
            local(g) = state(idx);
        }
        local = (gate * local).eval();
        for (Eigen::Index g = 0; g < gd; ++g) {
            Eigen::Index idx = base;
            for (int i = 0; i < k; ++i) {
                if ((g >> (k - 1 - i)) & 1) idx |= weight[i];
            }
            state(idx) = local(g);
        }
    }
}

Matrix unitary_from_state(const Vector& v) {
    const Eigen::Index d = v.size();
    if (d == 0 || std::abs(v.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("unitary_from_state: input must be a unit vector");
    }
    Matrix a = Matrix::Identity(d, d);
    a.col(0) = v;
    // Swap out the identity column that collides with the largest component of
    // v so the columns stay linearly independent before orthonormalization.
    Eigen::Index pivot;
    v.cwiseAbs().maxCoeff(&pivot);
    if (pivot != 0) a.col(pivot) = Vector::Unit(d, 0);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix u = qr.householderQ();
    // QR fixes the first column only up to phase; rotate it back onto v.
    const Complex overlap = u.col(0).dot(v);  // conj(u0) . v
    u.col(0) *= overlap / std::abs(overlap);
    if ((u.col(0) - v).norm() > 1e-9) {
        throw std::logic_error("unitary_from_state: completion failed");
    }
    return u;
}

}  // namespace dissim

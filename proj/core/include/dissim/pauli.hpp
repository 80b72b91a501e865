#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace dissim {

/// Single-qubit Pauli letter, encoded as I=00, X=01, Y=10, Z=11.
enum class PauliLetter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// Phase codes form Z_4: code k represents i^k (00=+1, 01=+i, 10=-1, 11=-i).
struct PauliPhase {
    std::uint8_t code = 0;

    std::complex<double> value() const {
        static constexpr double re[4] = {1, 0, -1, 0};
        static constexpr double im[4] = {0, 1, 0, -1};
        return {re[code & 3], im[code & 3]};
    }
    friend PauliPhase operator*(PauliPhase a, PauliPhase b) {
        return {static_cast<std::uint8_t>((a.code + b.code) & 3)};
    }
    bool operator==(const PauliPhase&) const = default;
};

/// A phased n-qubit Pauli string: i^phase * L_0 (x) L_1 (x) ... (x) L_{n-1},
/// with qubit 0 the leftmost letter (most significant tensor factor).
/// Letters are bit-packed two bits per qubit into 64-bit words.
class PauliString {
  public:
    explicit PauliString(std::uint32_t num_qubits);

    /// Parses the text form: optional prefix in {+, -, +i, -i, i} followed by
    /// letters over {I,X,Y,Z}, e.g. "-iXZY".
    static PauliString parse(std::string_view text);

    std::string str() const;

    std::uint32_t num_qubits() const { return num_qubits_; }
    PauliPhase phase() const { return phase_; }
    void set_phase(PauliPhase p) { phase_ = p; }

    PauliLetter letter(std::uint32_t q) const {
        return static_cast<PauliLetter>((words_[q >> 5] >> (2 * (q & 31))) & 3u);
    }
    void set_letter(std::uint32_t q, PauliLetter l) {
        std::uint64_t& w = words_[q >> 5];
        const unsigned shift = 2 * (q & 31);
        w = (w & ~(std::uint64_t{3} << shift)) |
            (static_cast<std::uint64_t>(l) << shift);
    }

    std::size_t weight() const;  ///< number of non-identity letters
    std::size_t count_letter(PauliLetter l) const;

    /// Elementwise complex conjugate: flips the phase imaginary part and
    /// negates once per Y letter.
    PauliString conjugated() const;

    /// Symbolic conjugation by H on every qubit: X<->Z, Y->-Y.
    PauliString hadamard_conjugated() const;

    Eigen::MatrixXcd to_dense() const;

    friend PauliString operator*(const PauliString& a, const PauliString& b);
    bool operator==(const PauliString& o) const {
        return num_qubits_ == o.num_qubits_ && phase_ == o.phase_ &&
               words_ == o.words_;
    }

  private:
    std::uint32_t num_qubits_;
    PauliPhase phase_;
    std::vector<std::uint64_t> words_;
};

/// Block-diagonal phased-Pauli operator sum_j |j><j| (x) P_j with R blocks,
/// all blocks on the same qubit count. Dense dimension is R * 2^n.
struct BlockDiagPauli {
    std::vector<PauliString> blocks;

    BlockDiagPauli() = default;
    explicit BlockDiagPauli(std::vector<PauliString> b);
    static BlockDiagPauli identity(std::size_t num_blocks,
                                   std::uint32_t num_qubits);

    std::size_t num_blocks() const { return blocks.size(); }
    std::uint32_t num_qubits() const;

    BlockDiagPauli conjugated() const;
    Eigen::MatrixXcd to_dense() const;

    friend BlockDiagPauli operator*(const BlockDiagPauli& a,
                                    const BlockDiagPauli& b);
    bool operator==(const BlockDiagPauli&) const = default;
};

struct ProductTreeStats {
    std::size_t depth = 0;      ///< reduction levels, == ceil(log2(len))
    std::size_t multiplies = 0; ///< total pairwise multiplies performed
};

/// Left-to-right product of a nonempty sequence, reduced as a binary tree of
/// pairwise multiplications. The unpaired element of an odd level is promoted
/// unchanged so the depth stays ceil(log2(len)).
PauliString product_tree(std::span<const PauliString> seq,
                         ProductTreeStats* stats = nullptr);
BlockDiagPauli product_tree(std::span<const BlockDiagPauli> seq,
                            ProductTreeStats* stats = nullptr);

/// Binary code of a block-diagonal Pauli: R consecutive blocks, each block n
/// groups of (2 phase bits || 2 letter bits). The block's global phase sits
/// in the first qubit slot; all other phase slots are 00.
std::string encode_binary(const BlockDiagPauli& f);

/// Strict inverse of encode_binary: rejects malformed lengths and nonzero
/// phase bits outside each block's first slot.
BlockDiagPauli decode_binary(const std::string& bits, std::uint32_t num_qubits);

}  // namespace dissim

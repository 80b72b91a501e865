#include "dissim/pauli.hpp"

#include <array>
#include <stdexcept>

namespace dissim {

namespace {

// Exponent of i contributed by the single-letter product a*b.
// X*Y=iZ, Y*Z=iX, Z*X=iY (cyclic, +1); the reversed order gives -1 (== 3 mod 4).
constexpr std::array<std::array<std::uint8_t, 4>, 4> kPhaseExp = {{
    // I  X  Y  Z
    {0, 0, 0, 0},  // I
    {0, 0, 1, 3},  // X
    {0, 3, 0, 1},  // Y
    {0, 1, 3, 0},  // Z
}};

constexpr char kLetterChar[4] = {'I', 'X', 'Y', 'Z'};

Eigen::Matrix2cd letter_matrix(PauliLetter l) {
    using namespace std::complex_literals;
    Eigen::Matrix2cd m;
    switch (l) {
        case PauliLetter::I: m << 1, 0, 0, 1; break;
        case PauliLetter::X: m << 0, 1, 1, 0; break;
        case PauliLetter::Y: m << 0, -1i, 1i, 0; break;
        case PauliLetter::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

}  // namespace

PauliString::PauliString(std::uint32_t num_qubits)
    : num_qubits_(num_qubits), phase_{0}, words_((num_qubits + 31) / 32, 0) {
    if (num_qubits == 0) {
        throw std::invalid_argument("PauliString: qubit count must be positive");
    }
}

PauliString PauliString::parse(std::string_view text) {
    std::uint8_t phase = 0;
    std::size_t pos = 0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        if (text[pos] == '-') phase = 2;
        ++pos;
    }
    if (pos < text.size() && text[pos] == 'i') {
        phase = (phase + 1) & 3;
        ++pos;
    }
    if (pos >= text.size()) {
        throw std::invalid_argument("PauliString: empty letter body in '" +
                                    std::string(text) + "'");
    }
    PauliString p(static_cast<std::uint32_t>(text.size() - pos));
    p.phase_ = {phase};
    for (std::uint32_t q = 0; pos < text.size(); ++pos, ++q) {
        switch (text[pos]) {
            case 'I': break;
            case 'X': p.set_letter(q, PauliLetter::X); break;
            case 'Y': p.set_letter(q, PauliLetter::Y); break;
            case 'Z': p.set_letter(q, PauliLetter::Z); break;
            default:
                throw std::invalid_argument(
                    "PauliString: invalid letter '" + std::string(1, text[pos]) +
                    "' in '" + std::string(text) + "'");
        }
    }
    return p;
}

std::string PauliString::str() const {
    static constexpr const char* kPrefix[4] = {"+", "+i", "-", "-i"};
    std::string out = kPrefix[phase_.code];
    out.reserve(out.size() + num_qubits_);
    for (std::uint32_t q = 0; q < num_qubits_; ++q) {
        out += kLetterChar[static_cast<int>(letter(q))];
    }
    return out;
}

std::size_t PauliString::weight() const {
    std::size_t w = 0;
    for (std::uint32_t q = 0; q < num_qubits_; ++q) {
        if (letter(q) != PauliLetter::I) ++w;
    }
    return w;
}

std::size_t PauliString::count_letter(PauliLetter l) const {
    std::size_t c = 0;
    for (std::uint32_t q = 0; q < num_qubits_; ++q) {
        if (letter(q) == l) ++c;
    }
    return c;
}

PauliString operator*(const PauliString& a, const PauliString& b) {
    if (a.num_qubits_ != b.num_qubits_) {
        throw std::invalid_argument("PauliString multiply: qubit count mismatch");
    }
    PauliString c(a.num_qubits_);
    unsigned exp = a.phase_.code + b.phase_.code;
    for (std::uint32_t q = 0; q < a.num_qubits_; ++q) {
        exp += kPhaseExp[static_cast<int>(a.letter(q))][static_cast<int>(b.letter(q))];
    }
    // The Klein four-group of letters multiplies by XOR of the 2-bit codes.
    for (std::size_t w = 0; w < c.words_.size(); ++w) {
        c.words_[w] = a.words_[w] ^ b.words_[w];
    }
    c.phase_ = {static_cast<std::uint8_t>(exp & 3)};
    return c;
}

PauliString PauliString::conjugated() const {
    PauliString c = *this;
    unsigned exp = (4 - phase_.code) + 2 * count_letter(PauliLetter::Y);
    c.phase_ = {static_cast<std::uint8_t>(exp & 3)};
    return c;
}

PauliString PauliString::hadamard_conjugated() const {
    PauliString c(num_qubits_);
    unsigned exp = phase_.code;
    for (std::uint32_t q = 0; q < num_qubits_; ++q) {
        switch (letter(q)) {
            case PauliLetter::I: break;
            case PauliLetter::X: c.set_letter(q, PauliLetter::Z); break;
            case PauliLetter::Z: c.set_letter(q, PauliLetter::X); break;
            case PauliLetter::Y:
                c.set_letter(q, PauliLetter::Y);
                exp += 2;  // HYH = -Y
                break;
        }
    }
    c.phase_ = {static_cast<std::uint8_t>(exp & 3)};
    return c;
}

Eigen::MatrixXcd PauliString::to_dense() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
    for (std::uint32_t q = 0; q < num_qubits_; ++q) {
        const Eigen::Matrix2cd l = letter_matrix(letter(q));
        Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
        next.topLeftCorner(m.rows(), m.cols()) = l(0, 0) * m;
        next.topRightCorner(m.rows(), m.cols()) = l(0, 1) * m;
        next.bottomLeftCorner(m.rows(), m.cols()) = l(1, 0) * m;
        next.bottomRightCorner(m.rows(), m.cols()) = l(1, 1) * m;
        m.swap(next);
    }
    return phase_.value() * m;
}

BlockDiagPauli::BlockDiagPauli(std::vector<PauliString> b) : blocks(std::move(b)) {
    if (blocks.empty()) {
        throw std::invalid_argument("BlockDiagPauli: needs at least one block");
    }
    for (const auto& p : blocks) {
        if (p.num_qubits() != blocks.front().num_qubits()) {
            throw std::invalid_argument("BlockDiagPauli: blocks must share qubit count");
        }
    }
}

BlockDiagPauli BlockDiagPauli::identity(std::size_t num_blocks,
                                        std::uint32_t num_qubits) {
    return BlockDiagPauli(
        std::vector<PauliString>(num_blocks, PauliString(num_qubits)));
}

std::uint32_t BlockDiagPauli::num_qubits() const {
    return blocks.front().num_qubits();
}

BlockDiagPauli BlockDiagPauli::conjugated() const {
    BlockDiagPauli c = *this;
    for (auto& p : c.blocks) p = p.conjugated();
    return c;
}

Eigen::MatrixXcd BlockDiagPauli::to_dense() const {
    const Eigen::Index d = Eigen::Index{1} << num_qubits();
    const Eigen::Index dim = static_cast<Eigen::Index>(blocks.size()) * d;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t j = 0; j < blocks.size(); ++j) {
        m.block(j * d, j * d, d, d) = blocks[j].to_dense();
    }
    return m;
}

BlockDiagPauli operator*(const BlockDiagPauli& a, const BlockDiagPauli& b) {
    if (a.num_blocks() != b.num_blocks() || a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("BlockDiagPauli multiply: shape mismatch");
    }
    BlockDiagPauli c = a;
    for (std::size_t j = 0; j < c.blocks.size(); ++j) {
        c.blocks[j] = a.blocks[j] * b.blocks[j];
    }
    return c;
}

namespace {

template <typename T>
T product_tree_impl(std::span<const T> seq, ProductTreeStats* stats) {
    if (seq.empty()) {
        throw std::invalid_argument("product_tree: empty sequence");
    }
    std::vector<T> level(seq.begin(), seq.end());
    ProductTreeStats s;
    while (level.size() > 1) {
        std::vector<T> next;
        next.reserve((level.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
            next.push_back(level[i] * level[i + 1]);
            ++s.multiplies;
        }
        if (level.size() % 2 == 1) next.push_back(level.back());
        level.swap(next);
        ++s.depth;
    }
    if (stats) *stats = s;
    return level.front();
}

}  // namespace

PauliString product_tree(std::span<const PauliString> seq,
                         ProductTreeStats* stats) {
    return product_tree_impl(seq, stats);
}

BlockDiagPauli product_tree(std::span<const BlockDiagPauli> seq,
                            ProductTreeStats* stats) {
    return product_tree_impl(seq, stats);
}

std::string encode_binary(const BlockDiagPauli& f) {
    const std::uint32_t n = f.num_qubits();
    std::string bits;
    bits.reserve(4 * f.num_blocks() * n);
    for (const auto& block : f.blocks) {
        const std::uint8_t p = block.phase().code;
        for (std::uint32_t q = 0; q < n; ++q) {
            if (q == 0) {
                bits += (p & 2) ? '1' : '0';
                bits += (p & 1) ? '1' : '0';
            } else {
                bits += "00";
            }
            const auto l = static_cast<std::uint8_t>(block.letter(q));
            bits += (l & 2) ? '1' : '0';
            bits += (l & 1) ? '1' : '0';
        }
    }
    return bits;
}

BlockDiagPauli decode_binary(const std::string& bits, std::uint32_t num_qubits) {
    const std::size_t slot = 4 * static_cast<std::size_t>(num_qubits);
    if (num_qubits == 0 || bits.empty() || bits.size() % slot != 0) {
        throw std::invalid_argument("decode_binary: malformed bit length " +
                                    std::to_string(bits.size()));
    }
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("decode_binary: non-binary character");
        }
    }
    const std::size_t num_blocks = bits.size() / slot;
    std::vector<PauliString> blocks;
    blocks.reserve(num_blocks);
    auto bit = [&](std::size_t i) { return static_cast<std::uint8_t>(bits[i] - '0'); };
    for (std::size_t j = 0; j < num_blocks; ++j) {
        PauliString p(num_qubits);
        const std::size_t base = j * slot;
        p.set_phase({static_cast<std::uint8_t>(2 * bit(base) + bit(base + 1))});
        for (std::uint32_t q = 0; q < num_qubits; ++q) {
            const std::size_t g = base + 4 * q;
            if (q != 0 && (bit(g) || bit(g + 1))) {
                throw std::invalid_argument(
                    "decode_binary: nonzero phase bits outside the first slot of "
                    "block " + std::to_string(j));
            }
            p.set_letter(q, static_cast<PauliLetter>(2 * bit(g + 2) + bit(g + 3)));
        }
        blocks.push_back(std::move(p));
    }
    return BlockDiagPauli(std::move(blocks));
}

}  // namespace dissim

#include "dissim/io.hpp"

#include <fstream>
#include <stdexcept>

namespace dissim {

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back({m(i, j).real(), m(i, j).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) {
        throw std::invalid_argument("matrix_from_json: expected a nonempty array of rows");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.at(0).size());
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = j.at(static_cast<std::size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw std::invalid_argument("matrix_from_json: ragged rows");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& entry = row.at(static_cast<std::size_t>(c));
            if (!entry.is_array() || entry.size() != 2) {
                throw std::invalid_argument(
                    "matrix_from_json: entries must be [re, im] pairs");
            }
            m(i, c) = Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
        }
    }
    return m;
}

Json vector_to_json(const Vector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back({v(i).real(), v(i).imag()});
    }
    return out;
}

Vector vector_from_json(const Json& j) {
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const auto& entry = j.at(static_cast<std::size_t>(i));
        if (!entry.is_array() || entry.size() != 2) {
            throw std::invalid_argument(
                "vector_from_json: entries must be [re, im] pairs");
        }
        v(i) = Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
    }
    return v;
}

Json lindblad_spec_to_json(const DissipativeLindbladSpec& spec) {
    Json jumps = Json::array();
    for (const auto& jump : spec.jumps) {
        Json entry;
        entry["g"] = jump.rate;
        if (jump.is_pauli()) {
            Json blocks = Json::array();
            for (const auto& p : std::get<BlockDiagPauli>(jump.op).blocks) {
                blocks.push_back(p.str());
            }
            entry["pauli_blocks"] = std::move(blocks);
        } else {
            entry["dense"] = matrix_to_json(std::get<Matrix>(jump.op));
        }
        jumps.push_back(std::move(entry));
    }
    return {{"n", spec.num_qubits}, {"jumps", std::move(jumps)}};
}

DissipativeLindbladSpec lindblad_spec_from_json(const Json& j) {
    DissipativeLindbladSpec spec;
    spec.num_qubits = j.at("n").get<int>();
    for (const auto& entry : j.at("jumps")) {
        Jump jump;
        jump.rate = entry.at("g").get<double>();
        if (entry.contains("pauli_blocks")) {
            std::vector<PauliString> blocks;
            for (const auto& text : entry.at("pauli_blocks")) {
                blocks.push_back(PauliString::parse(text.get<std::string>()));
            }
            jump.op = BlockDiagPauli(std::move(blocks));
        } else if (entry.contains("dense")) {
            jump.op = matrix_from_json(entry.at("dense"));
        } else {
            throw std::invalid_argument(
                "lindblad_spec_from_json: jump needs 'pauli_blocks' or 'dense'");
        }
        spec.jumps.push_back(std::move(jump));
    }
    spec.validate();
    return spec;
}

namespace {

Json gates_to_json(const std::vector<CircuitGate>& gates) {
    Json out = Json::array();
    for (const auto& g : gates) out.push_back({{"g", g.g}, {"q", g.q}});
    return out;
}

std::vector<CircuitGate> gates_from_json(const Json& j) {
    std::vector<CircuitGate> out;
    for (const auto& entry : j) {
        out.push_back({entry.at("g").get<std::string>(),
                       entry.at("q").get<std::vector<int>>()});
    }
    return out;
}

}  // namespace

Json gca_problem_to_json(const GcaProblem& p) {
    Json terms = Json::array();
    for (const auto& t : p.hamiltonian) {
        terms.push_back({{"coeff", t.coeff}, {"pauli", t.pauli.str()}});
    }
    return {{"n", p.n},
            {"beta", p.beta},
            {"epsilon", p.epsilon},
            {"delta", p.delta},
            {"hamiltonian", std::move(terms)},
            {"u1", gates_to_json(p.u1_gates)},
            {"u2", gates_to_json(p.u2_gates)}};
}

GcaProblem gca_problem_from_json(const Json& j) {
    GcaProblem p;
    p.n = j.at("n").get<int>();
    p.beta = j.at("beta").get<double>();
    if (j.contains("epsilon")) p.epsilon = j.at("epsilon").get<double>();
    if (j.contains("delta")) p.delta = j.at("delta").get<double>();
    for (const auto& term : j.at("hamiltonian")) {
        p.hamiltonian.emplace_back(
            term.at("coeff").get<double>(),
            PauliString::parse(term.at("pauli").get<std::string>()));
    }
    if (j.contains("u1")) p.u1_gates = gates_from_json(j.at("u1"));
    if (j.contains("u2")) p.u2_gates = gates_from_json(j.at("u2"));
    p.validate();
    return p;
}

Json cbe_to_json(const CbeChannel& c) {
    Json pairs = Json::array();
    for (const auto& p : c.pairs) {
        pairs.push_back({{"K", matrix_to_json(p.K)}, {"L", matrix_to_json(p.L)}});
    }
    return {{"n", c.n}, {"eta", c.eta}, {"pairs", std::move(pairs)}};
}

Json estimate_report_to_json(const EstimateReport& r) {
    return {{"estimate", r.estimate},
            {"schedule", r.powers},
            {"shots_per_power", r.shots_per_power},
            {"repeats", r.repeats},
            {"queries", r.queries},
            {"seed", r.seed}};
}

Json gca_estimate_to_json(const GcaEstimate& e) {
    return {{"re", e.re},
            {"im", e.im},
            {"method", e.method},
            {"amplification_factor", e.amplification_factor},
            {"raw_x", e.raw_x},
            {"raw_y", e.raw_y},
            {"queries", e.queries},
            {"seed", e.seed},
            {"near_boundary", e.near_boundary}};
}

Json cost_report_to_json(const CostReport& r) {
    Json params = Json::object();
    for (const auto& [key, value] : r.params) params[key] = value;
    return {{"method", r.method},
            {"queries", r.queries},
            {"depth", r.depth},
            {"ancillas", r.ancillas},
            {"runtime", r.runtime},
            {"params", std::move(params)}};
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return Json::parse(in);
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

}  // namespace dissim

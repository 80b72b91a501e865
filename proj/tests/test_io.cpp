#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <string>

#include "dissim/io.hpp"

using namespace dissim;

namespace {

std::mt19937_64 g_rng(777);

Matrix random_matrix(Eigen::Index r, Eigen::Index c) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j)
            m(i, j) = Complex(gauss(g_rng), gauss(g_rng));
    return m;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name)
        : path(std::string("dissim_test_") + name + ".json") {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("matrix and vector JSON round-trips are exact") {
    const Matrix m = random_matrix(3, 5);
    const Matrix back = matrix_from_json(matrix_to_json(m));
    CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);

    Vector v(4);
    v << Complex(1.5, -2.0), Complex(0, 0), Complex(-3, 4), Complex(0.1, 0.2);
    CHECK((vector_from_json(vector_to_json(v)) - v).cwiseAbs().maxCoeff() == 0.0);

    // Entries are [re, im] pairs, rows are arrays.
    const Json j = matrix_to_json(m);
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 3);
    REQUIRE(j[0].size() == 5);
    CHECK(j[1][2][0].get<double>() == m(1, 2).real());
    CHECK(j[1][2][1].get<double>() == m(1, 2).imag());
}

TEST_CASE("matrix parsing rejects malformed input") {
    CHECK_THROWS(matrix_from_json(Json::parse("[[1, 2], [3]]")));
    CHECK_THROWS(matrix_from_json(Json::parse("[[[1, 2]], [[3]]]")));
    CHECK_THROWS(matrix_from_json(Json::parse("\"nope\"")));
    CHECK_THROWS(vector_from_json(Json::parse("[[1, 2, 3]]")));
}

TEST_CASE("lindblad specs round-trip in both jump forms") {
    // Pure Pauli form with two blocks per jump.
    DissipativeLindbladSpec pauli_spec;
    pauli_spec.num_qubits = 2;
    pauli_spec.jumps.push_back(
        {0.9, BlockDiagPauli({PauliString::parse("+XZ"), PauliString::parse("-YI")})});
    const DissipativeLindbladSpec pauli_back =
        lindblad_spec_from_json(lindblad_spec_to_json(pauli_spec));
    CHECK(pauli_back.jumps[0].is_pauli());
    CHECK((pauli_back.jump_dense(0) - pauli_spec.jump_dense(0))
              .cwiseAbs()
              .maxCoeff() == 0.0);

    DissipativeLindbladSpec spec;
    spec.num_qubits = 2;
    spec.jumps.push_back({0.7, BlockDiagPauli({PauliString::parse("+XZ")})});
    Matrix cnot(4, 4);
    cnot << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0;
    spec.jumps.push_back({0.3, cnot});

    const Json j = lindblad_spec_to_json(spec);
    const DissipativeLindbladSpec back = lindblad_spec_from_json(j);
    CHECK(back.num_qubits == 2);
    REQUIRE(back.jump_count() == 2);
    CHECK(back.jumps[0].rate == 0.7);
    CHECK(back.jumps[0].is_pauli());
    CHECK(!back.jumps[1].is_pauli());
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK((back.jump_dense(i) - spec.jump_dense(i)).cwiseAbs().maxCoeff() ==
              0.0);
    }
    // Malformed: missing rate, unknown jump payload.
    CHECK_THROWS(lindblad_spec_from_json(
        Json::parse(R"({"n": 1, "jumps": [{"pauli_blocks": ["+X"]}]})")));
    CHECK_THROWS(lindblad_spec_from_json(
        Json::parse(R"({"n": 1, "jumps": [{"g": 1.0}]})")));
}

TEST_CASE("problem files round-trip") {
    GcaProblem p;
    p.n = 2;
    p.beta = 1.5;
    p.epsilon = 2e-3;
    p.delta = 0.1;
    p.hamiltonian = {{0.25, PauliString::parse("-ZX")},
                     {0.75, PauliString::parse("+XX")}};
    p.u1_gates = {{"H", {0}}, {"T", {1}}};
    p.u2_gates = {{"CNOT", {0, 1}}};
    const GcaProblem back = gca_problem_from_json(gca_problem_to_json(p));
    CHECK(back.n == p.n);
    CHECK(back.beta == p.beta);
    CHECK(back.epsilon == p.epsilon);
    CHECK(back.delta == p.delta);
    REQUIRE(back.hamiltonian.size() == 2);
    CHECK(back.hamiltonian[0].coeff == 0.25);
    CHECK(back.hamiltonian[0].pauli == PauliString::parse("-ZX"));
    REQUIRE(back.u1_gates.size() == 2);
    CHECK(back.u1_gates[1].g == "T");
    CHECK(back.u2_gates[0].q == std::vector<int>{0, 1});

    CHECK_THROWS(gca_problem_from_json(Json::parse(R"({"n": 1})")));
}

TEST_CASE("report serializers expose every field") {
    EstimateReport er;
    er.estimate = 0.42;
    er.powers = {1, 2, 4};
    er.shots_per_power = 64;
    er.repeats = 3;
    er.queries = 1234;
    er.seed = 99;
    const Json je = estimate_report_to_json(er);
    CHECK(je["estimate"].get<double>() == 0.42);
    CHECK(je["queries"].get<std::size_t>() == 1234);
    CHECK(je["seed"].get<std::uint64_t>() == 99);

    GcaEstimate ge;
    ge.re = 0.1;
    ge.im = -0.2;
    ge.method = "exact";
    ge.amplification_factor = 2.0;
    ge.near_boundary = true;
    const Json jg = gca_estimate_to_json(ge);
    CHECK(jg["re"].get<double>() == 0.1);
    CHECK(jg["im"].get<double>() == -0.2);
    CHECK(jg["method"].get<std::string>() == "exact");
    CHECK(jg["near_boundary"].get<bool>());

    const Json jc = cost_report_to_json(theorem1_cost(1.0, 1e-4, 2));
    CHECK(jc["method"].get<std::string>() == "theorem1");
    CHECK(jc["queries"].get<double>() > 0.0);

    const Json jb = cbe_to_json(gate_cbe(CbeGate::Y));
    CHECK(jb["eta"].get<double>() == 1.0);
    REQUIRE(jb["pairs"].size() == 1);
}

TEST_CASE("file IO round-trips and fails loudly") {
    TempFile tmp("roundtrip");
    Json j;
    j["hello"] = 1;
    j["nested"] = Json::array({1, 2, 3});
    write_json_file(tmp.path, j);
    CHECK(load_json_file(tmp.path) == j);
    // Written files end with a newline and are stable across rewrites.
    std::ifstream in(tmp.path, std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    CHECK(!text.empty());
    CHECK(text.back() == '\n');
    const std::string first = text;
    write_json_file(tmp.path, j);
    std::ifstream in2(tmp.path, std::ios::binary);
    std::string text2((std::istreambuf_iterator<char>(in2)),
                      std::istreambuf_iterator<char>());
    CHECK(text2 == first);

    CHECK_THROWS(load_json_file("definitely_missing_file_42.json"));
    TempFile bad("malformed");
    std::ofstream(bad.path) << "{ not json";
    CHECK_THROWS(load_json_file(bad.path));
}

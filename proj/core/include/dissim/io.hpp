#pragma once

#include <string>

#include <json.hpp>

#include "dissim/estimation.hpp"
#include "dissim/gca.hpp"
#include "dissim/lindblad.hpp"
#include "dissim/ndme_cbe.hpp"
#include "dissim/resources.hpp"

namespace dissim {

using Json = nlohmann::json;

/// Matrices are arrays of rows; each entry is [re, im].
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

/// {"n": int, "jumps": [{"g": rate, "pauli_blocks": ["+X", ...]} |
///                      {"g": rate, "dense": matrix}]}
Json lindblad_spec_to_json(const DissipativeLindbladSpec& spec);
DissipativeLindbladSpec lindblad_spec_from_json(const Json& j);

/// {"n", "beta", "epsilon", "delta",
///  "hamiltonian": [{"coeff", "pauli"}], "u1": [{"g", "q"}], "u2": [...]}
Json gca_problem_to_json(const GcaProblem& p);
GcaProblem gca_problem_from_json(const Json& j);

/// {"n", "eta", "pairs": [{"K": matrix, "L": matrix}]}
Json cbe_to_json(const CbeChannel& c);

Json estimate_report_to_json(const EstimateReport& r);
Json gca_estimate_to_json(const GcaEstimate& e);
Json cost_report_to_json(const CostReport& r);

Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace dissim

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dissim/circuit.hpp"

namespace dissim {

/// Closed-form cost point with all big-O constants set to 1.
struct CostReport {
    std::string method;
    double queries = 0.0;
    double depth = 0.0;
    double ancillas = 0.0;
    double runtime = 0.0;  ///< queries x per-query depth where meaningful
    std::vector<std::pair<std::string, double>> params;
};

CostReport theorem1_cost(double T, double epsilon, int M);
CostReport theorem2_cost(double T, double epsilon, int M, int R, int n);
CostReport theorem3_cost(double beta, double epsilon, double delta, int M,
                         int n, int n_h, int D);

/// QSVT baseline; with a known spectral norm the amplified variant is also
/// reported (requires alpha in (0, 1 - |H|)).
CostReport qsvt_cost(double beta, double epsilon, double delta, int M, int D,
                     std::optional<double> spectral_norm = std::nullopt,
                     double alpha = 0.5);

struct EnvelopeCheck {
    bool pass = false;
    double as_constructed = 0.0;
    double formula = 0.0;
    double ratio = 0.0;
};

/// As-constructed DAG depth must stay within c x the formula value.
EnvelopeCheck depth_envelope_check(const PurifiedCircuit& circuit,
                                   const CostReport& report, double c = 4.0);

std::string cost_table_csv(const std::vector<CostReport>& reports);

}  // namespace dissim

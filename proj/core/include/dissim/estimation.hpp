#pragma once

#include <cstdint>
#include <vector>

#include "dissim/linalg.hpp"

namespace dissim {

inline constexpr int kQubitCeiling = 14;

/// Overlap-estimation instance. The states are kept as vectors; preparation
/// unitaries on the padded space exist by completion (unitary_from_state) and
/// are never materialized densely at full register width.
struct AmplitudeProblem {
    Vector s1;
    Vector s2;
    double epsilon = 0.01;
    double delta = 0.05;

    static AmplitudeProblem from_unitaries(const Matrix& u1, const Matrix& u2,
                                           double epsilon, double delta);
    /// |<s1|s2>|, the quantity the estimators target.
    double truth() const;
};

/// (I - 2 U1|0><0|U1^dag)(I - 2 U2|0><0|U2^dag), dense.
Matrix grover_operator(const Matrix& u1, const Matrix& u2);

/// Block unitary (Pi, I-Pi; I-Pi, Pi) on one extra ancilla, for a projector Pi.
Matrix projector_block_unitary(const Matrix& pi);

/// Two-ancilla embedding turning Re (or Im) of <s1|s2> into a nonnegative
/// overlap: the returned problem has truth (1 + Re<s1|s2>)/2, or the Im
/// variant with the phase gate inserted.
AmplitudeProblem hadamard_test_embed(const Vector& s1, const Vector& s2,
                                     bool imag_part, double epsilon,
                                     double delta);

struct EstimateReport {
    double estimate = 0.0;
    std::vector<int> powers;  ///< Grover powers m_j in the schedule
    int shots_per_power = 0;
    int repeats = 0;
    std::size_t queries = 0;  ///< total state-preparation oracle calls
    std::uint64_t seed = 0;
};

/// Maximum-likelihood amplitude estimation over the exponential schedule
/// {1, 2, 4, ...} capped at ceil(1/(2 epsilon)). Measurement outcomes are
/// binomial draws from the exactly simulated probabilities
/// p_m = sin^2((2m-1) theta), sin(theta) = |<s1|s2>|.
EstimateReport mlae_estimate(const AmplitudeProblem& problem,
                             std::uint64_t seed, int shots_per_power = 64);

/// Mean of `shots` Bernoulli((1+x)/2) draws mapped back to [-1, 1].
double shot_estimate(double x, std::size_t shots, std::uint64_t seed);

}  // namespace dissim

#include "dissim/resources.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dissim/lindblad.hpp"

namespace dissim {

namespace {

int index_width(int M) {
    int w = 0;
    while ((1 << w) < M + 1) ++w;
    return w;
}

int ceil_log2(int k) {
    int b = 0;
    while ((1 << b) < k) ++b;
    return b;
}

double clamped(double epsilon) { return std::clamp(epsilon, 1e-15, 1.9); }

}  // namespace

CostReport theorem1_cost(double T, double epsilon, int M) {
    if (M < 1) throw std::invalid_argument("theorem1_cost: M must be >= 1");
    const int K = truncation_order(T, clamped(epsilon));
    CostReport r;
    r.method = "theorem1";
    r.queries = K;
    r.depth = static_cast<double>(K) * M;
    r.ancillas = static_cast<double>(K) * (1 + index_width(M));
    r.runtime = r.depth;
    r.params = {{"T", T}, {"epsilon", epsilon}, {"M", double(M)}, {"K", double(K)}};
    return r;
}

CostReport theorem2_cost(double T, double epsilon, int M, int R, int n) {
    if (M < 1 || R < 1 || n < 1) {
        throw std::invalid_argument("theorem2_cost: M, R, n must be >= 1");
    }
    const int K = truncation_order(T, clamped(epsilon));
    CostReport r;
    r.method = "theorem2";
    r.queries = K;
    r.depth = static_cast<double>(M) * ceil_log2(std::max(K, 1)) + R;
    r.ancillas = static_cast<double>(K) * (1 + index_width(M)) +
                 static_cast<double>(std::max(2 * K - 1, 0)) * 4.0 * R * n;
    r.runtime = r.depth;
    r.params = {{"T", T},         {"epsilon", epsilon}, {"M", double(M)},
                {"R", double(R)}, {"n", double(n)},     {"K", double(K)}};
    return r;
}

CostReport theorem3_cost(double beta, double epsilon, double delta, int M,
                         int n, int n_h, int D) {
    if (M < 1 || n < 1 || n_h < 0 || D < 0) {
        throw std::invalid_argument("theorem3_cost: invalid structure parameters");
    }
    if (!(epsilon > 0.0) || !(delta > 0.0) || !(beta >= 0.0)) {
        throw std::invalid_argument("theorem3_cost: invalid accuracy parameters");
    }
    const double factor = std::pow(2.0, -0.5 * (n - n_h));
    const int K = truncation_order(beta, clamped(epsilon / factor));
    const double per_query_depth =
        static_cast<double>(M) * ceil_log2(std::max(K, 1)) + D;
    CostReport r;
    r.method = "theorem3";
    r.queries = factor / epsilon * std::log(1.0 / delta);
    r.depth = per_query_depth;
    r.ancillas = static_cast<double>(K) * (1 + index_width(M)) +
                 static_cast<double>(std::max(2 * K - 1, 0)) * 8.0 * n;
    r.runtime = r.queries * per_query_depth;
    r.params = {{"beta", beta},   {"epsilon", epsilon}, {"delta", delta},
                {"M", double(M)}, {"n", double(n)},     {"n_h", double(n_h)},
                {"D", double(D)}, {"K", double(K)}};
    return r;
}

CostReport qsvt_cost(double beta, double epsilon, double delta, int M, int D,
                     std::optional<double> spectral_norm, double alpha) {
    if (M < 1 || D < 0 || !(epsilon > 0.0) || !(delta > 0.0) || !(beta >= 0.0)) {
        throw std::invalid_argument("qsvt_cost: invalid parameters");
    }
    CostReport r;
    const double queries =
        1.0 / epsilon * std::log(1.0 / delta) * std::log(1.0 / epsilon);
    if (spectral_norm) {
        const double h = *spectral_norm;
        if (!(alpha > 0.0) || !(alpha < 1.0 - h)) {
            throw std::invalid_argument(
                "qsvt_cost: alpha must lie in (0, 1 - |H|)");
        }
        r.method = "qsvt-amplified";
        const double per_query = D + static_cast<double>(M) / alpha * std::sqrt(beta);
        const double boost = std::exp(beta * (h / (1.0 - alpha) - 1.0));
        r.queries = boost * queries;
        r.depth = per_query;
        r.runtime = r.queries * per_query;
        r.params = {{"beta", beta},   {"epsilon", epsilon}, {"delta", delta},
                    {"M", double(M)}, {"D", double(D)},     {"norm", h},
                    {"alpha", alpha}};
    } else {
        r.method = "qsvt";
        const double per_query = static_cast<double>(M) * std::sqrt(beta) + D;
        r.queries = queries;
        r.depth = per_query;
        r.runtime = r.queries * per_query;
        r.params = {{"beta", beta},
                    {"epsilon", epsilon},
                    {"delta", delta},
                    {"M", double(M)},
                    {"D", double(D)}};
    }
    r.ancillas = 1;
    return r;
}

EnvelopeCheck depth_envelope_check(const PurifiedCircuit& circuit,
                                   const CostReport& report, double c) {
    EnvelopeCheck e;
    e.as_constructed = circuit.depth();
    e.formula = report.depth;
    const double reference = std::max(e.formula, 1.0);
    e.ratio = e.as_constructed / reference;
    e.pass = e.as_constructed <= c * reference;
    return e;
}

std::string cost_table_csv(const std::vector<CostReport>& reports) {
    std::ostringstream out;
    out << "method,queries,depth,ancillas,runtime,params\n";
    for (const auto& r : reports) {
        out << r.method << ',' << r.queries << ',' << r.depth << ','
            << r.ancillas << ',' << r.runtime << ',';
        for (std::size_t i = 0; i < r.params.size(); ++i) {
            if (i) out << ';';
            out << r.params[i].first << '=' << r.params[i].second;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace dissim

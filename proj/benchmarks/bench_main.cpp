#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "dissim/lindblad.hpp"
#include "dissim/pauli.hpp"

namespace {

using namespace dissim;

std::vector<PauliString> random_strings(std::size_t count, std::uint32_t n,
                                        std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<PauliString> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        PauliString p(n);
        p.set_phase({static_cast<std::uint8_t>(rng() & 3)});
        for (std::uint32_t q = 0; q < n; ++q) {
            p.set_letter(q, static_cast<PauliLetter>(rng() & 3));
        }
        out.push_back(p);
    }
    return out;
}

void BM_pauli_multiply(benchmark::State& state) {
    const auto n = static_cast<std::uint32_t>(state.range(0));
    const auto strings = random_strings(256, n, 7);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(strings[i & 255] * strings[(i + 1) & 255]);
        ++i;
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}
BENCHMARK(BM_pauli_multiply)->Arg(4)->Arg(16)->Arg(64)->Arg(256);

void BM_product_tree(benchmark::State& state) {
    const auto len = static_cast<std::size_t>(state.range(0));
    const auto strings = random_strings(len, 16, 11);
    for (auto _ : state) {
        ProductTreeStats stats;
        benchmark::DoNotOptimize(product_tree(strings, &stats));
    }
    state.SetItemsProcessed(
        static_cast<std::int64_t>(state.iterations() * (len - 1)));
}
BENCHMARK(BM_product_tree)->Arg(64)->Arg(1024)->Arg(16384);

void BM_sequential_fold(benchmark::State& state) {
    const auto len = static_cast<std::size_t>(state.range(0));
    const auto strings = random_strings(len, 16, 11);
    for (auto _ : state) {
        PauliString acc = strings.front();
        for (std::size_t i = 1; i < len; ++i) acc = acc * strings[i];
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(
        static_cast<std::int64_t>(state.iterations() * (len - 1)));
}
BENCHMARK(BM_sequential_fold)->Arg(64)->Arg(1024)->Arg(16384);

void BM_taylor_channel_apply(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    DissipativeLindbladSpec spec;
    spec.num_qubits = n;
    std::mt19937_64 rng(5);
    const char letters[4] = {'I', 'X', 'Y', 'Z'};
    for (int j = 0; j < 4; ++j) {
        std::string text = "+";
        for (int q = 0; q < n; ++q) text += letters[rng() % 4];
        spec.jumps.push_back({0.25, BlockDiagPauli({PauliString::parse(text)})});
    }
    const auto plan = make_truncation_plan(spec.lindblad_norm() * 1.0, 1e-8);
    const Eigen::Index d = spec.dim();
    Matrix rho = Matrix::Zero(d, d);
    rho(0, 0) = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_taylor_channel(spec, plan, rho));
    }
}
BENCHMARK(BM_taylor_channel_apply)->Arg(2)->Arg(4)->Arg(6);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <random>

#include <didq/codes.hpp>
#include <didq/geometry.hpp>
#include <didq/typicality.hpp>
#include <didq/verify.hpp>

using namespace didq;

namespace {

ComplexMatrix random_hermitian(std::size_t d, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    ComplexMatrix a(d);
    for (std::size_t r = 0; r < d; ++r) {
        a(r, r) = g(rng);
        for (std::size_t c = r + 1; c < d; ++c) {
            a(r, c) = Complex(g(rng), g(rng));
            a(c, r) = std::conj(a(r, c));
        }
    }
    return a;
}

ComplexMatrix random_state(std::size_t d, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    ComplexMatrix a(d);
    for (auto& x : a.data()) x = Complex(g(rng), g(rng));
    ComplexMatrix rho = a * a.adjoint();
    return Complex(1.0 / trace(rho).real(), 0.0) * rho;
}

void BM_HermEig(benchmark::State& state)
{
    std::mt19937_64 rng(1);
    const ComplexMatrix h = random_hermitian(static_cast<std::size_t>(state.range(0)), rng);
    for (auto _ : state) benchmark::DoNotOptimize(herm_eig(h));
}
BENCHMARK(BM_HermEig)->RangeMultiplier(4)->Range(4, 256)->Unit(benchmark::kMillisecond);

void BM_HermEigenvalues(benchmark::State& state)
{
    std::mt19937_64 rng(1);
    const ComplexMatrix h = random_hermitian(static_cast<std::size_t>(state.range(0)), rng);
    for (auto _ : state) benchmark::DoNotOptimize(herm_eigenvalues(h));
}
BENCHMARK(BM_HermEigenvalues)->RangeMultiplier(4)->Range(4, 256)->Unit(benchmark::kMillisecond);

void BM_TypicalProjector(benchmark::State& state)
{
    std::mt19937_64 rng(2);
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<ComplexMatrix> letters;
    for (std::size_t i = 0; i < n; ++i) letters.push_back(random_state(2, rng));
    const ProductState word(letters);
    for (auto _ : state) benchmark::DoNotOptimize(typical_projector(word, 1.0));
}
BENCHMARK(BM_TypicalProjector)->DenseRange(4, 16, 4);

void BM_GreedyPacking(benchmark::State& state)
{
    const PointCloud cloud(CqChannel::bloch_circle(), Grid{{static_cast<std::size_t>(state.range(0))}}, Metric::SqrtHs);
    for (auto _ : state) benchmark::DoNotOptimize(greedy_packing(cloud, 0.05));
}
BENCHMARK(BM_GreedyPacking)->RangeMultiplier(4)->Range(1024, 16384);

void BM_GvCode(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(gv_code(6, static_cast<std::size_t>(state.range(0)), 0.25));
}
BENCHMARK(BM_GvCode)->DenseRange(4, 7, 1)->Unit(benchmark::kMillisecond);

void BM_PureErrors(benchmark::State& state)
{
    const Assembly a = assemble_pure(CqChannel::bloch_circle(), static_cast<std::size_t>(state.range(0)), 0.5, 0.25);
    for (auto _ : state) benchmark::DoNotOptimize(measure_errors(a.code));
}
BENCHMARK(BM_PureErrors)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();

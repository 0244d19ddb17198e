#include "resolab/factorization.hpp"
#include "resolab/jost.hpp"
#include "resolab/kernels.hpp"
#include "resolab/reconstruction.hpp"
#include "resolab/zeros.hpp"

#include <benchmark/benchmark.h>

using namespace resolab;

static void BM_JostConstant(benchmark::State& st)
{
    const Potential q = Potential::constant(1.0);
    const cplx z(30.0, -4.0);
    for (auto _ : st) benchmark::DoNotOptimize(jost_function(q, z));
}
BENCHMARK(BM_JostConstant);

static void BM_JostPolynomial(benchmark::State& st)
{
    const Potential q({Piece{0.0, 0.5, {cplx(1.0), cplx(2.0, -1.0)}}, Piece{0.5, 1.0, {cplx(0.5), cplx(0.0), cplx(1.0)}}});
    const cplx z(10.0, -1.0);
    for (auto _ : st) benchmark::DoNotOptimize(jost_function(q, z));
}
BENCHMARK(BM_JostPolynomial);

static void BM_FindZeros(benchmark::State& st)
{
    const ForwardJost f(Potential::constant(1.0));
    const double R = static_cast<double>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(find_zeros(f, R));
}
BENCHMARK(BM_FindZeros)->Arg(30)->Arg(120)->Unit(benchmark::kMillisecond);

static void BM_KKernel(benchmark::State& st)
{
    const double h = 1.0 / static_cast<double>(st.range(0));
    const Potential q1, q2 = Potential::constant(4.0, 0.0, 0.25);
    for (auto _ : st) benchmark::DoNotOptimize(k_kernel(q1, q2, h));
}
BENCHMARK(BM_KKernel)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_LKernel(benchmark::State& st)
{
    const auto K = k_kernel(Potential(), Potential::constant(1.0), 1.0 / static_cast<double>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(l_kernel(K));
}
BENCHMARK(BM_LKernel)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_FourierInversion(benchmark::State& st)
{
    const ForwardJost f(Potential::constant(1.0));
    std::vector<double> ts(129);
    for (int j = 0; j <= 128; ++j) ts[j] = j / 64.0;
    const double Z = static_cast<double>(st.range(0));
    for (auto _ : st)
        benchmark::DoNotOptimize(fourier_invert_diff([&](double z) { return f.value(cplx(z)) - 1.0; }, Z, ts));
}
BENCHMARK(BM_FourierInversion)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_Reconstruct(benchmark::State& st)
{
    const Potential qt = Potential::constant(0.5);
    const ZeroSet zs = find_zeros(ForwardJost(qt), 120.0);
    for (auto _ : st) benchmark::DoNotOptimize(reconstruct_from_zeros(zs, Potential(), 2.0, 1.0 / 64));
}
BENCHMARK(BM_Reconstruct)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();

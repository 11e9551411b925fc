// Parallel kernels against their serial references.
#include "zigzag/floquet.hpp"
#include "zigzag/spectra.hpp"

#include <benchmark/benchmark.h>
#include <cmath>

using namespace zigzag;

namespace {

const Potential& mathieu()
{
    static const Potential q = Potential::sampled([](double t) { return 2.0 * std::cos(2.0 * kPi * t); }, 1025);
    return q;
}

std::vector<double> lambda_grid(int n)
{
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = -3.0 + 300.0 * i / (n - 1);
    return g;
}

void BM_discriminant(benchmark::State& st)
{
    const auto g = lambda_grid(static_cast<int>(st.range(0)));
    const std::vector<ChannelParams> chs{ChannelParams::make(3, 1, 0.3)};
    for (auto _ : st)
        benchmark::DoNotOptimize(st.range(1) ? tabulate_discriminant(mathieu(), g, chs)
                                             : tabulate_discriminant_serial(mathieu(), g, chs));
}
BENCHMARK(BM_discriminant)->Args({2000, 0})->Args({2000, 1})->Unit(benchmark::kMillisecond);

void BM_fibers(benchmark::State& st)
{
    const auto ch = ChannelParams::make(3, 1, 0.3);
    const auto p = uniform_p_grid(128);
    for (auto _ : st)
        benchmark::DoNotOptimize(st.range(0) ? spectrum_via_fibers(mathieu(), ch, p, {-3.0, 150.0})
                                             : spectrum_via_fibers_serial(mathieu(), ch, p, {-3.0, 150.0}));
}
BENCHMARK(BM_fibers)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_sweep(benchmark::State& st)
{
    std::vector<double> B;
    for (int i = 0; i < 16; ++i)
        B.push_back(0.2 * i);
    for (auto _ : st)
        benchmark::DoNotOptimize(st.range(0) ? sweep_field(mathieu(), 3, B, {-3.0, 100.0})
                                             : sweep_field_serial(mathieu(), 3, B, {-3.0, 100.0}));
}
BENCHMARK(BM_sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
